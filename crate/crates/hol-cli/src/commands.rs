//! One report builder per subcommand. Reports are `serde_json::Value`
//! objects with sorted keys, so output is byte-stable across runs.

use std::collections::BTreeMap;
use std::path::Path;

use hol_arith::ratmodz::format_rational;
use hol_arith::{Exec, Place, Q};
use hol_global::torsor::format_slope;
use hol_global::{
    numeric_invariants, pic_group, se_exists, torsor, twist_datum, validate_csa, w_group, w_level_group, GlobalError,
    LevelDivisor, LevelJson, OrderDescriptor, OrderJson, SlopeDivisor, SlopeJson,
};
use hol_local::chain::default_precision;
use hol_local::morita::random_right_lattice;
use hol_local::torus::check_diagonal_torus;
use hol_local::{
    stably_free_test, BimoduleChain, ChainDescriptor, ChainOrder, LatticeChain, MaxTorus, PhiBimodule,
    ENUMERATION_BUDGET,
};
use hol_special::{chart_point, special_test, CandidateJson};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::{Command, CsaCmd, GlobalCmd, LocalCmd, PicCmd, SeCmd, SpecialCmd, TwistCmd, WCmd};

/// Lattices transported through the Morita equivalence per report.
const MORITA_SAMPLES: usize = 5;

pub fn dispatch(cmd: &Command, seed: u64) -> Result<Value> {
    let exec = Exec::default();
    match cmd {
        Command::Local(LocalCmd::Analyze(c)) => local_analyze(&c.chain, c.precision),
        Command::Local(LocalCmd::Morita(c)) => local_morita(&c.chain, c.precision, seed),
        Command::Local(LocalCmd::Phi { chain, n, m }) => local_phi(&chain.chain, chain.precision, *n, *m, seed, exec),
        Command::Csa(CsaCmd::Validate { order }) => csa_validate(order),
        Command::Global(GlobalCmd::Invariants { order }) => global_invariants(order),
        Command::Pic(PicCmd::Group { order }) => pic_report(order),
        Command::W(WCmd::Group { order, pole, level }) => w_report(order, pole, level.as_deref(), exec),
        Command::Se(SeCmd::Torsor { a, b, slope, level, max_n }) => {
            se_torsor(a, b, slope, level.as_deref(), *max_n, exec)
        }
        Command::Twist(TwistCmd::Datum { a, pole, new_pole, level }) => {
            twist_report(a, pole, new_pole, level.as_deref(), exec)
        }
        Command::Special(SpecialCmd::Check { module }) => special_check(module),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let p = path.display().to_string();
    let s = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
    serde_json::from_str(&s).map_err(|source| CliError::Json { path: p, source })
}

/// `u128` as a JSON number when it fits in `u64`, as a string otherwise.
fn big(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn rational(x: &Q) -> Value {
    Value::String(format_rational(x))
}

/// `--precision`, then `HOL_PRECISION`, then the default for the chain shape.
pub fn resolve_precision(flag: Option<usize>, desc: &ChainDescriptor) -> Result<usize> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var("HOL_PRECISION") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Argument(format!("HOL_PRECISION={s} is not a positive integer"))),
        Err(_) => Ok(default_precision(desc.d, desc.e)),
    }
}

fn load_chain(path: &Path, precision: Option<usize>) -> Result<(ChainDescriptor, ChainOrder, usize)> {
    let desc: ChainDescriptor = read_json(path)?;
    let prec = resolve_precision(precision, &desc)?;
    let chain = LatticeChain::from_descriptor(&desc, Some(prec))?;
    Ok((desc, ChainOrder::from_chain(&chain)?, prec))
}

fn local_analyze(path: &Path, precision: Option<usize>) -> Result<Value> {
    let (desc, a, prec) = load_chain(path, precision)?;
    let inv = a.invariants();
    let e = a.index() as i64;
    let radical_identity = a.ideal_power_by_products(e)? == a.lattice().shift(1);
    let doubled = ChainOrder::from_chain(&LatticeChain::from_descriptor(&desc, Some(2 * prec))?)?;
    let radical_identity_2n = doubled.ideal_power_by_products(e)? == doubled.lattice().shift(1);
    let overs = a.maximal_overorders()?;
    let sum = overs.iter().skip(1).fold(overs[0].lattice().clone(), |s, o| s.sum(o.lattice()));
    let torus = check_diagonal_torus(&a, &MaxTorus::diagonal(&a)?)?;
    let dec = stably_free_test(&a, a.lattice())?;
    Ok(json!({
        "q": desc.q,
        "d": a.dim(),
        "precision": prec,
        "index": a.index(),
        "invariants": inv.invariants,
        "type": inv.type_t,
        "principal": inv.principal,
        "f": inv.f,
        "radical_verified": a.verify_radical()?,
        "radical_power_is_t_order": radical_identity,
        "radical_power_is_t_order_at_2n": radical_identity_2n,
        "residue_semisimple": a.residue_is_semisimple()?,
        "maximal_overorders": overs.len(),
        "overorder_sum_is_inverse_radical_power": sum == a.ideal_power(1 - inv.type_t as i64)?,
        "regular_module_multiplicities": dec.multiplicities,
        "diagonal_torus_maximal": torus.passes(a.dim()),
    }))
}

fn local_morita(path: &Path, precision: Option<usize>, seed: u64) -> Result<Value> {
    let (_, a, _) = load_chain(path, precision)?;
    let bc = BimoduleChain::new(&a)?;
    let checks = bc.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round_trips = 0;
    for _ in 0..MORITA_SAMPLES {
        let m = random_right_lattice(&a, 1, 3, &mut rng)?;
        let fm = bc.transport(&m)?;
        if bc.is_b_chain(&fm)? && bc.untransport(&fm)? == m {
            round_trips += 1;
        }
    }
    Ok(json!({
        "type": bc.type_t(),
        "radical_shifts_i": checks.radical_shifts_i,
        "b_radical_shifts_i": checks.b_radical_shifts_i,
        "radical_shifts_j": checks.radical_shifts_j,
        "sum_is_order": checks.sum_is_order,
        "graded_dims": checks.graded_dims,
        "samples": MORITA_SAMPLES,
        "round_trips": round_trips,
    }))
}

fn local_phi(path: &Path, precision: Option<usize>, n: u32, m: i64, seed: u64, exec: Exec) -> Result<Value> {
    let (_, a, prec) = load_chain(path, precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = PhiBimodule::new(&a, n, m, &mut rng)?;
    let scalar = phi.power_scalar(prec.max(1))?;
    let b = phi.endomorphisms(2 * a.index() + 2, exec, ENUMERATION_BUDGET)?;
    let r = &b.residue;
    Ok(json!({
        "n": n,
        "m": m,
        "slope": rational(&phi.slope()),
        "twisted_linear": phi.is_twisted_linear()?,
        "power_scalar_valuation": scalar.valuation,
        "endomorphisms": {
            "rank": b.rank,
            "index": b.index,
            "depth": b.depth,
            "residue": {
                "size": r.size,
                "dim_over_fp": r.dim_over_fp,
                "commutative": r.commutative,
                "semisimple": r.semisimple,
                "zero_divisors": r.zero_divisors,
                "blocks": r.blocks,
                "local_index": r.local_index,
                "is_field": r.is_field,
            },
        },
    }))
}

fn load_order(path: &Path) -> Result<OrderDescriptor> {
    let j: OrderJson = read_json(path)?;
    Ok(OrderDescriptor::from_json(&j)?)
}

fn load_level(o: &OrderDescriptor, path: Option<&Path>) -> Result<LevelDivisor> {
    match path {
        Some(p) => Ok(LevelDivisor::from_json(o, &read_json::<LevelJson>(p)?)?),
        None => Ok(LevelDivisor::zero()),
    }
}

fn place_arg(o: &OrderDescriptor, s: &str) -> Result<Place> {
    Ok(Place::parse(o.field(), s)?)
}

fn csa_validate(path: &Path) -> Result<Value> {
    let o = load_order(path)?;
    validate_csa(o.csa())?;
    let ramified: BTreeMap<String, String> = o.csa().ramified().map(|(x, a)| (x.to_string(), a.to_string())).collect();
    Ok(json!({
        "valid": true,
        "brauer_sum": 0,
        "q": o.q(),
        "d": o.d(),
        "ramified": ramified,
    }))
}

fn global_invariants(path: &Path) -> Result<Value> {
    let o = load_order(path)?;
    let n = numeric_invariants(&o);
    let bad: BTreeMap<String, u32> = n.bad.iter().map(|(x, c)| (x.to_string(), *c)).collect();
    let cosets: Vec<Value> = hol_global::descriptor::strong_class_cosets(&n).iter().map(rational).collect();
    Ok(json!({
        "e": n.e,
        "delta": n.delta,
        "degree": rational(&n.degree),
        "bad": bad,
        "strong_classes": n.e / n.delta,
        "strong_class_degrees": cosets,
    }))
}

fn pic_report(path: &Path) -> Result<Value> {
    let o = load_order(path)?;
    let p = pic_group(&o)?;
    let factors: Vec<Value> = p.group.invariant_factors().iter().map(|&x| big(x as u128)).collect();
    let pic0: Vec<Value> = p.pic0.torsion_factors().iter().map(|&x| big(x as u128)).collect();
    Ok(json!({
        "generators": p.ngens(),
        "invariant_factors": factors,
        "free_rank": p.group.free_rank(),
        "delta": p.delta,
        "degree_image": format!("(1/{})Z", p.delta),
        "pic0_factors": pic0,
        "pic0_order": p.pic0.order().map(big),
    }))
}

fn w_report(path: &Path, pole: &str, level: Option<&Path>, exec: Exec) -> Result<Value> {
    let o = load_order(path)?;
    let pole = place_arg(&o, pole)?;
    let level = load_level(&o, level)?;
    if level.is_zero() {
        let w = w_group(&o, &pole)?;
        let factors: Vec<Value> = w.w.torsion_factors().iter().map(|&x| big(x as u128)).collect();
        return Ok(json!({
            "pole": pole.to_string(),
            "order": big(w.order()),
            "invariant_factors": factors,
            "pic0_order": big(w.galois_kernel_order),
            "galois_degree": w.galois_degree,
            "galois_image_order": w.galois_image_order,
            "predicted_image_order": rational(&w.predicted_image_order),
        }));
    }
    let w = w_level_group(&o, &pole, &level, exec)?;
    let units: BTreeMap<String, Value> = w.unit_orders.iter().map(|u| (format!("{}^{}", u.place, u.n), big(u.units))).collect();
    Ok(json!({
        "pole": pole.to_string(),
        "order": big(w.order),
        "kernel_order": big(w.kernel_order),
        "unit_orders": units,
        "pic0_order": big(w.pic0_order),
        "pole_in_level": w.pole_in_level,
        "galois_degree": w.galois_degree,
        "galois_image_order": w.galois_image_order,
    }))
}

/// The twist attached to `D = (1/d) pole - (1/d) p`, when `D` has that shape
/// and `B` is the order the twist produces.
fn matching_twist(a: &OrderDescriptor, b: &OrderDescriptor, d: &SlopeDivisor, level: &LevelDivisor, exec: Exec) -> Result<Value> {
    let unit = Q::new(1, a.d() as i64);
    let coeffs: Vec<(&Place, &Q)> = d.coeffs().iter().collect();
    let (pole, new_pole) = match coeffs.as_slice() {
        [(x, mx), (y, my)] if **mx == unit && **my == -unit => (*x, *y),
        [(x, mx), (y, my)] if **mx == -unit && **my == unit => (*y, *x),
        _ => return Ok(Value::Null),
    };
    match twist_datum(a, pole, new_pole, level, exec) {
        Ok(t) if t.b.invariant_map() == b.invariant_map() => Ok(json!({
            "pole": pole.to_string(),
            "new_pole": new_pole.to_string(),
            "m": t.m,
            "w_order": big(t.w_order),
            "identity_holds": t.identity_holds,
            "statement": t.statement,
        })),
        Ok(_) | Err(GlobalError::Assumption(_)) => Ok(Value::Null),
        Err(e) => Err(e.into()),
    }
}

fn se_torsor(a: &Path, b: &Path, slope: &Path, level: Option<&Path>, max_n: u64, exec: Exec) -> Result<Value> {
    let (a, b) = (load_order(a)?, load_order(b)?);
    let d = SlopeDivisor::from_json(&a, &read_json::<SlopeJson>(slope)?)?;
    let level = load_level(&a, level)?;
    if !se_exists(&a, &b, &d)? {
        let counts: BTreeMap<String, u64> = (1..=max_n).map(|n| (n.to_string(), 0)).collect();
        return Ok(json!({
            "exists": false,
            "slope": format_slope(&d),
            "W_order": 0,
            "theta_order": Value::Null,
            "counts": counts,
            "twist": Value::Null,
        }));
    }
    let t = torsor(&a, &b, &level, &d, exec)?;
    let counts: BTreeMap<u64, Value> = t.counts(max_n).into_iter().map(|(n, c)| (n, big(c))).collect();
    let counts: serde_json::Map<String, Value> = counts.into_iter().map(|(n, c)| (n.to_string(), c)).collect();
    let degrees: BTreeMap<String, u32> = t.residue_degrees.iter().map(|(x, k)| (x.to_string(), *k)).collect();
    Ok(json!({
        "exists": true,
        "slope": format_slope(&d),
        "W_order": big(t.w_order),
        "theta_order": big(t.theta_order),
        "orbits": big(t.orbit_count),
        "residue_degrees": degrees,
        "degree_zero": t.degree_zero,
        "counts": counts,
        "twist": matching_twist(&a, &b, &d, &level, exec)?,
    }))
}

fn twist_report(a: &Path, pole: &str, new_pole: &str, level: Option<&Path>, exec: Exec) -> Result<Value> {
    let a = load_order(a)?;
    let (pole, new_pole) = (place_arg(&a, pole)?, place_arg(&a, new_pole)?);
    let level = load_level(&a, level)?;
    let t = twist_datum(&a, &pole, &new_pole, &level, exec)?;
    Ok(json!({
        "pole": pole.to_string(),
        "new_pole": new_pole.to_string(),
        "b": t.b.to_json(),
        "m": t.m,
        "w_theta": t.w.theta,
        "w_order": big(t.w_order),
        "w_group_order": big(t.w_group_order),
        "identity_holds": t.identity_holds,
        "statement": t.statement,
    }))
}

fn special_check(path: &Path) -> Result<Value> {
    let j: CandidateJson = read_json(path)?;
    let m = j.to_candidate()?;
    let special = special_test(&m, j.rank)?;
    let chart = if special && j.rank == 1 { Some(chart_point(&m)?) } else { None };
    let product = chart.as_ref().map(|c| c.iter().fold(1, |acc, &x| m.field().mul(acc, x)));
    Ok(json!({
        "q": j.q,
        "d": m.d(),
        "rank": j.rank,
        "eigenspace_dims": m.eigenspace_dims(),
        "special": special,
        "chart": chart,
        "chart_product": product,
        "uniformizer": m.uniformizer,
    }))
}
