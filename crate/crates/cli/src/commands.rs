//! One function per subcommand. Each returns a report object and whether
//! the verdict is positive.

use crate::error::CliError;
use crate::report::{self, algebra_element, base_elements, conformal_element, elements};
use crate::spec::AlgebraSpec;
use confalg::algebra::{kernel_decompose, kernel_reconstruct, DEFAULT_NILPOTENCY_CAP};
use confalg::growth::{gk_profile, in_rational_span, span_rank};
use confalg::oracle::{coeff_assoc_check, coefficient_ring, oracle_check, OracleReport};
use confalg::sample::Sampler;
use confalg::structure::*;
use confalg::*;
use serde_json::{json, Map, Value};

pub const DEFAULT_CAP: u32 = 64;
pub const DEFAULT_WINDOW: i64 = confalg::oracle::DEFAULT_WINDOW;

/// Flags shared by the subcommands; `None` means the command's default.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub window: Option<i64>,
    pub degree: Option<u32>,
    pub rmax: Option<u32>,
    pub cap: Option<u32>,
}

impl Flags {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }
    fn cap(&self) -> u32 {
        self.cap.unwrap_or(DEFAULT_CAP)
    }
    fn window(&self) -> Result<i64, CliError> {
        match self.window.unwrap_or(DEFAULT_WINDOW) {
            w if w >= 1 => Ok(w),
            w => Err(CliError::Usage(format!("--window must be at least 1, got {w}"))),
        }
    }
}

pub struct Outcome {
    pub report: Map<String, Value>,
    pub ok: bool,
}

impl Outcome {
    fn new(ok: bool, fields: Value) -> Self {
        Self::with_verdict(ok, if ok { "pass" } else { "fail" }, fields)
    }

    /// For decisions, where either answer is a successful run.
    fn with_verdict(ok: bool, verdict: &str, fields: Value) -> Self {
        let Value::Object(mut report) = fields else { unreachable!("reports are objects") };
        report.insert("verdict".into(), Value::String(verdict.into()));
        Self { report, ok }
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn oracle_json(r: &OracleReport) -> Value {
    json!({
        "matches": r.matches,
        "compared": [r.compared.0, r.compared.1],
        "mismatches": r.mismatches.iter().map(|m| json!({
            "n": m.n,
            "conformal": report::ore_element(&m.conformal),
            "residue": report::ore_element(&m.residue),
        })).collect::<Vec<_>>(),
    })
}

pub fn check_axioms(spec: &AlgebraSpec, f: &Flags) -> Result<Outcome, CliError> {
    let samples = f.samples.unwrap_or(200);
    let degree = f.degree.unwrap_or(3);
    let r = confalg::check_axioms(&spec.algebra, samples, f.seed(), degree)?;
    let violations: Vec<_> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": format!("{:?}", v.axiom),
                "a": conformal_element(&v.a),
                "b": conformal_element(&v.b),
                "n": v.n,
            })
        })
        .collect();
    Ok(Outcome::new(
        r.passed(),
        json!({ "samples": samples, "seed": f.seed(), "degree": degree, "checks": r.checks, "violations": violations }),
    ))
}

pub fn product(spec: &AlgebraSpec, a: &Option<String>, b: &Option<String>, n: Option<u32>, f: &Flags) -> Result<Outcome, CliError> {
    let (sa, sb) = (required(a, "a")?, required(b, "b")?);
    let (x, y) = (spec.element(sa)?, spec.element(sb)?);
    let orders: Vec<u32> = match n {
        Some(n) => vec![n],
        None => {
            let loc = locality_degree(&spec.algebra, &x, &y, f.cap())?;
            (0..=loc.degree.unwrap_or(0)).collect()
        }
    };
    let mut products = Vec::new();
    for n in orders {
        let p = spec.algebra.nprod(&x, n, &y)?;
        products.push(json!({ "n": n, "product": conformal_element(&p) }));
    }
    Ok(Outcome::new(
        true,
        json!({ "a": conformal_element(&x), "b": conformal_element(&y), "products": products }),
    ))
}

pub fn table(spec: &AlgebraSpec, gens: &[String], f: &Flags) -> Result<Outcome, CliError> {
    let g = spec.generator_set(gens)?;
    let t = product_table(&spec.algebra, &g, f.cap())?;
    let entries: Vec<_> = t
        .entries
        .iter()
        .map(|(&(i, n, j), p)| {
            json!({ "left": t.names[i], "n": n, "right": t.names[j], "product": conformal_element(p) })
        })
        .collect();
    let gens: Map<String, Value> = g
        .names()
        .iter()
        .zip(g.elements())
        .map(|(n, e)| (n.clone(), conformal_element(e)))
        .collect();
    Ok(Outcome::new(true, json!({ "generators": gens, "nonzero_products": entries })))
}

pub fn locality(spec: &AlgebraSpec, a: &Option<String>, b: &Option<String>, f: &Flags) -> Result<Outcome, CliError> {
    let (x, y) = (spec.element(required(a, "a")?)?, spec.element(required(b, "b")?)?);
    let inputs = json!({ "a": conformal_element(&x), "b": conformal_element(&y), "cap": f.cap() });
    let mut out = match locality_degree(&spec.algebra, &x, &y, f.cap()) {
        Ok(loc) => Outcome::with_verdict(
            true,
            "determinate",
            json!({ "locality": loc.degree, "all_zero": loc.degree.is_none(), "structural_bound": loc.bound }),
        ),
        Err(Error::IndeterminateLocality { cap, bound }) => Outcome::with_verdict(
            false,
            "indeterminate",
            json!({ "locality": "indeterminate", "structural_bound": bound, "cap": cap }),
        ),
        Err(e) => return Err(e.into()),
    };
    out.report.insert("inputs".into(), inputs);
    Ok(out)
}

fn sampled_pairs(spec: &AlgebraSpec, f: &Flags, count: usize) -> Vec<(ConformalElement, ConformalElement, ConformalElement)> {
    let span = spec.algebra.base().spanning_up_to(f.degree.unwrap_or(3));
    let mut s = Sampler::new(f.seed());
    (0..count)
        .map(|_| (s.conformal_element(&span), s.conformal_element(&span), s.conformal_element(&span)))
        .collect()
}

pub fn oracle(spec: &AlgebraSpec, a: &Option<String>, b: &Option<String>, orders: &[u32], f: &Flags) -> Result<Outcome, CliError> {
    let w = f.window()?;
    let ring = coefficient_ring(&spec.algebra);
    let pairs = match (a, b) {
        (Some(a), Some(b)) => vec![(spec.element(a)?, spec.element(b)?)],
        (None, None) => sampled_pairs(spec, f, f.samples.unwrap_or(100))
            .into_iter()
            .map(|(x, y, _)| (x, y))
            .collect(),
        _ => return Err(CliError::Usage("pass both --a and --b, or neither to sample".into())),
    };
    let mut failures = Vec::new();
    let mut compared = 0;
    for (x, y) in &pairs {
        let ms: Vec<u32> = if orders.is_empty() {
            let loc = locality_degree(&spec.algebra, x, y, f.cap())?;
            let top = loc.degree.map_or(0, |d| d + 1).min(w as u32);
            (0..=top).collect()
        } else {
            orders.to_vec()
        };
        for m in ms {
            let r = oracle_check(&spec.algebra, &ring, x, m, y, w)?;
            compared += 1;
            if !r.matches || pairs.len() == 1 {
                failures.push(json!({
                    "a": conformal_element(x), "m": m, "b": conformal_element(y), "report": oracle_json(&r),
                }));
            }
        }
    }
    let ok = failures.iter().all(|f| f["report"]["matches"] == true);
    let key = if pairs.len() == 1 { "checks" } else { "failures" };
    Ok(Outcome::new(
        ok,
        json!({ "window": w, "pairs": pairs.len(), "orders_checked": compared, key: failures }),
    ))
}

pub fn assoc(spec: &AlgebraSpec, abc: [&Option<String>; 3], orders: &[u32], f: &Flags) -> Result<Outcome, CliError> {
    let w = f.window()?;
    let ring = coefficient_ring(&spec.algebra);
    let triples = match abc {
        [Some(a), Some(b), Some(c)] => vec![(spec.element(a)?, spec.element(b)?, spec.element(c)?)],
        [None, None, None] => sampled_pairs(spec, f, f.samples.unwrap_or(5)),
        _ => return Err(CliError::Usage("pass all of --a, --b, --c, or none to sample".into())),
    };
    let order_pairs: Vec<(u32, u32)> = match orders {
        [] => (0..=2).flat_map(|m1| (0..=2).map(move |m2| (m1, m2))).collect(),
        [m1, m2] => vec![(*m1, *m2)],
        _ => return Err(CliError::Usage("--orders takes two values m1,m2".into())),
    };
    let mut failures = Vec::new();
    let mut coefficient_triples = 0;
    for (x, y, z) in &triples {
        let r = coeff_assoc_check(&ring, x, y, z, &order_pairs, w)?;
        coefficient_triples += r.triples;
        if !r.passed {
            let iterated: Vec<Value> = r
                .iterated
                .iter()
                .filter(|(_, o)| !o.matches)
                .map(|((m1, m2), o)| json!({ "orders": [m1, m2], "report": oracle_json(o) }))
                .collect();
            failures.push(json!({
                "a": conformal_element(x), "b": conformal_element(y), "c": conformal_element(z),
                "triple_failures": r.triple_failures.iter().map(|t| [t.0, t.1, t.2]).collect::<Vec<_>>(),
                "iterated": iterated,
            }));
        }
    }
    Ok(Outcome::new(
        failures.is_empty(),
        json!({
            "window": w,
            "triples": triples.len(),
            "orders": order_pairs.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
            "coefficient_triples": coefficient_triples,
            "failures": failures,
        }),
    ))
}

pub fn untwist(spec: &AlgebraSpec, f: &Flags) -> Result<Outcome, CliError> {
    let degree = f.degree.unwrap_or(2);
    let r = confalg::structure::untwist(&spec.algebra, degree)?;
    let basis: Vec<_> = r
        .basis
        .iter()
        .map(|(b, p)| json!({ "b": algebra_element(b), "b_prime": conformal_element(p) }))
        .collect();
    Ok(Outcome::new(
        r.passed(),
        json!({
            "degree": degree,
            "r": algebra_element(&r.r),
            "nilpotency_index": r.m,
            "e_prime": conformal_element(&r.e_prime),
            "identity_certified": r.identity.certified,
            "identity_failures": r.identity.failures,
            "basis": basis,
            "pure_current": r.pure_current,
            "product_failures": r.product_failures,
            "inverse_ok": r.inverse_ok,
            "determinant": r.determinant.as_ref().map(report::polynomial),
            "r_double_product": r.r_double_product,
            "opposite_sign_current": r.opposite_sign_current,
        }),
    ))
}

pub fn is_current_cmd(spec: &AlgebraSpec, a: &Option<String>, f: &Flags) -> Result<Outcome, CliError> {
    let x = spec.base_element(required(a, "a")?)?;
    let degree = f.degree.unwrap_or(6);
    let cap = f.cap.unwrap_or(DEFAULT_NILPOTENCY_CAP);
    let r = is_current(spec.algebra.base(), &x, degree, cap)?;
    let (verdict, result) = match &r.verdict {
        CurrentnessVerdict::Current { witness } => (
            "current".to_string(),
            json!({ "current": true, "witness": algebra_element(witness) }),
        ),
        CurrentnessVerdict::NonCurrentUpTo { degree } => (
            format!("non_current_up_to({degree})"),
            json!({ "current": false, "non_current_up_to": degree }),
        ),
    };
    Ok(Outcome::with_verdict(
        true,
        &verdict,
        json!({ "a": algebra_element(&x), "degree": degree, "tested_on": r.tested_on, "result": result }),
    ))
}

pub fn dual_identity(spec: &AlgebraSpec, e: &Option<String>, f: &Flags) -> Result<Outcome, CliError> {
    let ebar = spec.element(required(e, "e")?)?;
    let degree = f.degree.unwrap_or(2);
    let samples = f.samples.unwrap_or(5);
    let r = dual_identity_consistency(&spec.algebra, &ebar, degree, samples, f.seed())?;
    Ok(Outcome::new(
        r.passed(),
        json!({
            "e": conformal_element(&ebar),
            "components": base_elements(&r.components),
            "power_failures": r.power_failures,
            "bracket_checks": r.bracket_checks,
            "bracket_failures": base_elements(&r.bracket_failures),
        }),
    ))
}

fn same_span(a: &[ConformalElement], b: &[ConformalElement]) -> bool {
    span_rank(a) == span_rank(b) && a.iter().all(|x| in_rational_span(b, x))
}

pub fn ideal_check(spec: &AlgebraSpec, ideal: &Option<String>, gens: &[String], f: &Flags) -> Result<Outcome, CliError> {
    let srcs: Vec<String> = match (ideal, gens.is_empty()) {
        (Some(name), true) => spec
            .ideals
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("no ideal named {name:?} in the spec")))?,
        (None, false) => gens.to_vec(),
        _ => return Err(CliError::Usage("pass exactly one of --ideal and --gens".into())),
    };
    let g = srcs.iter().map(|s| spec.base_element(s)).collect::<Result<Vec<_>, _>>()?;
    let degree = f.degree.unwrap_or(3);
    let c = &spec.algebra;
    let pair = ideal_lift(c, &g, degree)?;
    let nil = nilpotency_check(c, &pair, f.cap.unwrap_or(8))?;
    let back = ideal_restrict(c, &pair.j, degree)?;
    let tl = |v: &[AlgebraElement]| v.iter().map(ConformalElement::tilde).collect::<Vec<_>>();
    let restrict_lift = same_span(&tl(&back), &tl(&pair.i));
    let again = ideal_lift(c, &back, degree)?;
    let lift_restrict = same_span(&again.j, &pair.j);
    Ok(Outcome::new(
        restrict_lift && lift_restrict && nil.agree(),
        json!({
            "generators": base_elements(&g),
            "degree": degree,
            "ideal_basis": base_elements(&pair.i),
            "conformal_generators": elements(&pair.j),
            "nilpotency": {
                "b_side": nil.b_side,
                "conformal_side": nil.conformal_side,
                "conformal_order0": nil.conformal_order0,
                "agree": nil.agree(),
            },
            "restrict_lift_identity": restrict_lift,
            "lift_restrict_identity": lift_restrict,
        }),
    ))
}

pub fn unital_split_cmd(spec: &AlgebraSpec, e: &Option<String>, span: &[String]) -> Result<Outcome, CliError> {
    let unit = spec.element(required(e, "e")?)?;
    let span: Vec<ConformalElement> = if span.is_empty() {
        spec.generator_set(&[])?.elements().to_vec()
    } else {
        span.iter().map(|s| spec.element(s)).collect::<Result<_, _>>()?
    };
    let s = unital_split(&spec.algebra, &span, &unit)?;
    Ok(Outcome::new(
        s.idempotent,
        json!({
            "e": conformal_element(&unit),
            "rank": s.rank,
            "rank_m0": s.rank_m0,
            "rank_m1": s.rank_m1,
            "m0": elements(&s.m0),
            "m1": elements(&s.m1),
            "idempotent": s.idempotent,
        }),
    ))
}

pub fn kernel(spec: &AlgebraSpec, a: &Option<String>) -> Result<Outcome, CliError> {
    let x = spec.base_element(required(a, "a")?)?;
    let d = spec.algebra.derivation();
    let parts = kernel_decompose(&x, d)?;
    let in_kernel = parts
        .iter()
        .map(|(_, k)| d.apply(k).map(|v| v.is_zero()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|b| b);
    let rebuilt = kernel_reconstruct(x.shape(), &parts) == x;
    let parts: Vec<_> = parts
        .iter()
        .map(|(i, k)| json!({ "i": i, "a_i": algebra_element(k) }))
        .collect();
    Ok(Outcome::new(
        in_kernel && rebuilt,
        json!({ "a": algebra_element(&x), "parts": parts, "parts_in_kernel": in_kernel, "reconstructs": rebuilt }),
    ))
}

pub fn gk(spec: &AlgebraSpec, gens: &[String], f: &Flags) -> Result<Outcome, CliError> {
    let g = spec.generator_set(gens)?;
    let rmax = f.rmax.unwrap_or(8);
    let p = gk_profile(&spec.algebra, &g, rmax, f.cap())?;
    Ok(Outcome::with_verdict(
        true,
        p.classification.as_str(),
        json!({
            "generators": p.generators,
            "rmax": rmax,
            "ranks": p.ranks.iter().map(|&(r, k)| json!({ "r": r, "rank": k })).collect::<Vec<_>>(),
            "exponent": format!("{:.3}", p.exponent),
            "classification": p.classification.as_str(),
        }),
    ))
}
