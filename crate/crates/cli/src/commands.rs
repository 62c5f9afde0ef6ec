//! One function per subcommand. Each returns an [`Outcome`]; `Err(message)`
//! is an input error and becomes exit code 2.

use std::path::Path;
use std::str::FromStr;

use idalg::exactnum::{BigRational, Field, PrimeFieldElem, PrimeModulus, Rationals};
use idalg::hasse::{axiom_suite, hasse_apply, hasse_from_p_powers, p_power_constant, HasseError, SuiteConfig};
use idalg::idmod::{
    b1_bruteforce, b1_case_analysis, check_iterative, example_system, horizontal_sections, verify_sections, BranchVerdict,
    IDModule, IdModError,
};
use idalg::mahler::{
    admissible_initial, evaluate_at_point, residual, singularity_check, solve_series, MahlerError, MahlerSystem, PoleKind,
    SeriesSolution, SingularityVerdict,
};
use idalg::polyseries::{Poly, RatFun, TruncSeries};
use idalg::relations::{find_relations_with, specialize_check, with_z_variable, RelationBasis, Residual, Value};
use idalg::Execution;
use serde_json::{json, Value as Json};

use crate::parse::parse_expr;
use crate::report::{Outcome, Status};
use crate::sysfile::SystemFile;
use crate::{Command, HasseCmd, IdmodCmd, MahlerCmd, ModuleSource, RelationsCmd, SeriesSource};

type Q = BigRational;
type CmdResult = Result<Outcome, String>;
/// Inner `Err` is a mathematical failure already turned into a report.
type Checked<T> = Result<Result<T, Outcome>, String>;

/// Reconstruction is checked for `n ≤ min(p³, RECON_MAX_N)` on `t^k`, `k ≤ RECON_MAX_K`.
const RECON_MAX_N: u64 = 512;
const RECON_MAX_K: usize = 64;
const SHOWN_FAILURES: usize = 10;
const SHOWN_COEFFS: usize = 10;

pub fn execute(cmd: &Command) -> Outcome {
    let name = cmd.name();
    let result = match cmd {
        Command::Hasse(HasseCmd::Check { p, bound, samples, deg, seed }) => hasse_check(name, *p, *bound, *samples, *deg, *seed),
        Command::Hasse(HasseCmd::Apply { index, expr, p }) => hasse_apply_cmd(name, *index, expr, *p),
        Command::Idmod(IdmodCmd::Check { source, bound, order }) => idmod_check(name, source, *bound, *order),
        Command::Idmod(IdmodCmd::Sections { source, order }) => idmod_sections(name, source, *order),
        Command::Idmod(IdmodCmd::Example { p, digits }) => idmod_example(name, *p, digits),
        Command::Idmod(IdmodCmd::B1 { p, a0, deg }) => idmod_b1(name, *p, *a0, *deg),
        Command::Mahler(MahlerCmd::Solve { file, order }) => mahler_solve(name, file, *order),
        Command::Mahler(MahlerCmd::Singular { file, alpha }) => mahler_singular(name, file, alpha),
        Command::Mahler(MahlerCmd::Eval { file, alpha, order, steps }) => mahler_eval(name, file, alpha, *order, *steps),
        Command::Relations(RelationsCmd::Find { source }) => relations_find(name, source),
        Command::Relations(RelationsCmd::Specialize { source, alpha, values, tol, steps }) => {
            relations_specialize(name, source, alpha.as_deref(), values, *tol, *steps)
        }
    };
    result.unwrap_or_else(|msg| Outcome::error(name, msg))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn modulus(p: u64) -> Result<PrimeModulus, String> {
    PrimeModulus::new(p).map_err(|e| e.to_string())
}

fn read_system(path: &Path) -> Result<SystemFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    SystemFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_rational(s: &str) -> Result<Q, String> {
    Q::from_str(s.trim()).map_err(|_| format!("'{s}' is not a rational number a/b"))
}

fn field_name(p: Option<u64>) -> String {
    p.map_or_else(|| "Q".to_string(), |p| format!("F_{p}"))
}

fn series_coeffs<F: Field>(s: &TruncSeries<F>) -> Vec<String> {
    (0..s.order()).map(|k| s.coeff(k).map_or_else(|| "0".into(), |c| c.to_string())).collect()
}

fn series_head<F: Field>(s: &TruncSeries<F>) -> String {
    let c = series_coeffs(s);
    let shown = c.iter().take(SHOWN_COEFFS).cloned().collect::<Vec<_>>().join(", ");
    if c.len() > SHOWN_COEFFS {
        format!("[{shown}, ...] mod z^{}", s.order())
    } else {
        format!("[{shown}] mod z^{}", s.order())
    }
}

// ---- hasse ----

fn hasse_check(name: &str, p: Option<u64>, bound: u64, samples: usize, deg: usize, seed: Option<u64>) -> CmdResult {
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig { samples, max_degree: deg, bound, seed: seed.unwrap_or(defaults.seed), ..defaults };
    let exec = Execution::default();
    let (report, recon) = match p {
        None => (axiom_suite::<BigRational>(&Rationals, &cfg, exec), None),
        Some(p) => {
            let m = modulus(p)?;
            (axiom_suite::<PrimeFieldElem>(&m, &cfg, exec), Some(reconstruction(m)))
        }
    };
    let recon_ok = recon.as_ref().is_none_or(|r| r.mismatches == 0 && r.zero_constants == 0);
    let ok = report.passed() && recon_ok;
    let field = field_name(p);
    let summary = if report.passed() {
        format!("{field}: all {} axiom checks passed ({} samples, bound {})", report.checks, report.samples, report.bound)
    } else {
        format!("{field}: {} of {} axiom checks failed", report.failures.len(), report.checks)
    };
    let failures: Vec<Json> = report
        .failures
        .iter()
        .take(SHOWN_FAILURES)
        .map(|f| json!({ "axiom": f.axiom.to_string(), "sample": f.sample, "i": f.i, "j": f.j, "detail": f.detail }))
        .collect();
    let mut lines: Vec<String> =
        report.failures.iter().take(SHOWN_FAILURES).map(|f| format!("{} failed at i = {}, j = {} (sample {}): {}", f.axiom, f.i, f.j, f.sample, f.detail)).collect();
    if let Some(r) = &recon {
        lines.push(format!(
            "p-power reconstruction for n <= {}, t^k with k <= {}: {} cases, {} mismatches, {} zero constants",
            r.max_n, r.max_k, r.checked, r.mismatches, r.zero_constants
        ));
    }
    let data = json!({
        "field": field,
        "samples": report.samples,
        "max_degree": deg,
        "bound": report.bound,
        "seed": cfg.seed,
        "checks": report.checks,
        "failure_count": report.failures.len(),
        "failures": failures,
        "reconstruction": recon.map(|r| json!({
            "max_n": r.max_n, "max_k": r.max_k, "checked": r.checked,
            "mismatches": r.mismatches, "zero_constants": r.zero_constants,
        })),
    });
    Ok(Outcome::new(name, status(ok), summary, data, lines))
}

struct Reconstruction {
    max_n: u64,
    max_k: usize,
    checked: u64,
    mismatches: u64,
    zero_constants: u64,
}

fn reconstruction(m: PrimeModulus) -> Reconstruction {
    let p = m.get();
    let max_n = p.saturating_pow(3).min(RECON_MAX_N);
    let mut r = Reconstruction { max_n, max_k: RECON_MAX_K, checked: 0, mismatches: 0, zero_constants: 0 };
    let monos: Vec<Poly<PrimeFieldElem>> = (0..=RECON_MAX_K).map(|k| Poly::monomial(m.elem(1), k)).collect();
    for n in 0..=max_n {
        match p_power_constant::<PrimeFieldElem>(&m, n) {
            Ok((c, _)) if !Field::is_zero(&c) => {}
            _ => r.zero_constants += 1,
        }
        for f in &monos {
            r.checked += 1;
            let same = matches!((hasse_from_p_powers(n, p, f), hasse_apply(n, f)), (Ok(a), Ok(b)) if a == b);
            if !same {
                r.mismatches += 1;
            }
        }
    }
    r
}

fn hasse_error(e: HasseError) -> String {
    e.to_string()
}

fn hasse_apply_cmd(name: &str, i: u64, expr: &str, p: Option<u64>) -> CmdResult {
    fn go<F: Field>(ctx: &F::Ctx, i: u64, expr: &str) -> Result<(String, String), String> {
        let f: RatFun<F> = parse_expr(expr, ctx).map_err(|e| e.to_string())?;
        let d = hasse_apply(i, &f).map_err(hasse_error)?;
        Ok((f.render('t'), d.render('t')))
    }
    let (input, result) = match p {
        None => go::<BigRational>(&Rationals, i, expr)?,
        Some(p) => go::<PrimeFieldElem>(&modulus(p)?, i, expr)?,
    };
    let summary = format!("∂_{i}({input}) = {result}");
    let data = json!({ "field": field_name(p), "index": i, "input": input, "result": result });
    Ok(Outcome::new(name, Status::Pass, summary, data, Vec::new()))
}

// ---- idmod ----

fn idmod_error(e: IdModError) -> String {
    e.to_string()
}

fn load_module(src: &ModuleSource) -> Result<IDModule, String> {
    if let Some(path) = &src.file {
        return read_system(path)?.idmodule().map_err(|e| format!("{}: {e}", path.display()));
    }
    let p = src.p.ok_or("give --file, or --p with --digits")?;
    if src.digits.is_empty() {
        return Err("--digits is required with --p".into());
    }
    example_system(p, &src.digits).map_err(idmod_error)
}

fn module_json(m: &IDModule) -> Json {
    json!({ "p": m.p(), "rank": m.rank(), "level": m.level() })
}

fn idmod_check(name: &str, src: &ModuleSource, bound: Option<u64>, order: i64) -> CmdResult {
    let m = load_module(src)?;
    let bound = bound.unwrap_or_else(|| m.max_index().min(16));
    let rep = check_iterative(&m, bound, order).map_err(idmod_error)?;
    let failure = rep.first_failure.as_ref().map(|f| {
        json!({ "axiom": f.axiom.to_string(), "i": f.i, "j": f.j, "vector": f.vector, "lhs": f.lhs, "rhs": f.rhs })
    });
    let (summary, lines) = match &rep.first_failure {
        None => (format!("iterative connection axioms hold: {} checks, indices <= {bound}, mod t^{order}", rep.checks), Vec::new()),
        Some(f) => (
            format!("{} axiom fails at (i, j) = ({}, {}) on test vector {}", f.axiom, f.i, f.j, f.vector),
            vec![format!("lhs = [{}]", f.lhs.join(", ")), format!("rhs = [{}]", f.rhs.join(", "))],
        ),
    };
    let data = json!({
        "module": module_json(&m),
        "bound": rep.bound,
        "order": rep.precision,
        "checks": rep.checks,
        "passed": rep.passed(),
        "first_failure": failure,
    });
    Ok(Outcome::new(name, status(rep.passed()), summary, data, lines))
}

fn idmod_sections(name: &str, src: &ModuleSource, order: Option<i64>) -> CmdResult {
    let m = load_module(src)?;
    let order = order.unwrap_or_else(|| m.max_index() as i64 + 1);
    let s = horizontal_sections(&m, order).map_err(idmod_error)?;
    let verified = verify_sections(&m, &s).map_err(idmod_error)?;
    let basis: Vec<Vec<String>> = s.basis.iter().map(|v| v.iter().map(|c| c.render('t')).collect()).collect();
    let lines: Vec<String> = basis.iter().map(|v| format!("({})", v.join(", "))).collect();
    let summary = format!("horizontal sections mod t^{order}: dimension {}", s.dimension());
    let data = json!({
        "module": module_json(&m),
        "order": s.order,
        "dimension": s.dimension(),
        "basis": basis,
        "achieved": s.achieved.iter().map(|(i, o)| json!({ "index": i, "order": o })).collect::<Vec<_>>(),
        "verified": verified,
    });
    Ok(Outcome::new(name, status(verified), summary, data, lines))
}

fn idmod_example(name: &str, p: u64, digits: &[u64]) -> CmdResult {
    let m = example_system(p, digits).map_err(idmod_error)?;
    let mats: Vec<Vec<Vec<String>>> =
        m.matrices().iter().map(|a| a.iter().map(|row| row.iter().map(|f| f.render('t')).collect()).collect()).collect();
    let lines = mats
        .iter()
        .enumerate()
        .map(|(n, a)| {
            let rows: Vec<String> = a.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            format!("A{n} = [{}]", rows.join(", "))
        })
        .collect();
    let summary = format!("example system over F_{p}(t), level {}, digits {digits:?}", m.level());
    let data = json!({ "module": module_json(&m), "digits": digits, "matrices": mats });
    Ok(Outcome::new(name, Status::Pass, summary, data, lines))
}

fn verdict_str(v: BranchVerdict) -> &'static str {
    match v {
        BranchVerdict::Refuted => "refuted",
        BranchVerdict::Inconclusive => "inconclusive",
    }
}

fn idmod_b1(name: &str, p: u64, a0: u64, deg: usize) -> CmdResult {
    let sols = b1_bruteforce(p, a0, deg).map_err(idmod_error)?;
    let ca = b1_case_analysis(p, a0).map_err(idmod_error)?;
    let solutions: Vec<Json> = sols
        .iter()
        .map(|(f, g)| {
            let b1 = RatFun::normalize(f.clone(), g.clone()).expect("monic denominator");
            json!({ "f": f.render('t'), "g": g.render('t'), "b1": b1.render('t') })
        })
        .collect();
    let summary = match sols.len() {
        0 => format!("no solutions with deg f, deg g <= {deg} (p = {p}, a0 = {a0})"),
        n => format!("{n} solution(s) with deg f, deg g <= {deg} (p = {p}, a0 = {a0})"),
    };
    let mut lines: Vec<String> = solutions.iter().map(|s| format!("b1 = {}", s["b1"].as_str().unwrap_or_default())).collect();
    lines.push(format!(
        "case analysis: branch A {}, branch B {} (allowed residues {:?}, 1 + a0 = {} mod p)",
        verdict_str(ca.branch_a),
        verdict_str(ca.branch_b),
        ca.allowed_residues,
        ca.final_coefficient
    ));
    let data = json!({
        "p": p,
        "a0": a0,
        "deg": deg,
        "solutions": solutions,
        "case_analysis": {
            "branch_a": verdict_str(ca.branch_a),
            "branch_b": verdict_str(ca.branch_b),
            "both_refuted": ca.both_refuted(),
            "factors": ca.factors.iter().map(|(i, v)| json!([i, v])).collect::<Vec<_>>(),
            "allowed_residues": ca.allowed_residues,
            "identity_verified": ca.identity_verified,
            "final_coefficient": ca.final_coefficient,
        },
    });
    Ok(Outcome::new(name, Status::Pass, summary, data, lines))
}

// ---- mahler ----

fn mahler_input_error(e: MahlerError) -> String {
    e.to_string()
}

fn load_mahler(path: &Path) -> Result<(MahlerSystem, Option<Vec<Q>>), String> {
    read_system(path)?.mahler().map_err(|e| format!("{}: {e}", path.display()))
}

fn system_json(sys: &MahlerSystem) -> Json {
    json!({
        "q": sys.q(),
        "rank": sys.rank(),
        "denominator": sys.denominator().render('z'),
        "det_numerator": sys.det_numerator().render('z'),
    })
}

fn rationals(v: &[Q]) -> Vec<String> {
    v.iter().map(Q::to_string).collect()
}

/// The initial vectors to solve from: `f0` if given, else the admissible basis.
fn initial_vectors(sys: &MahlerSystem, f0: Option<Vec<Q>>) -> Result<Vec<Vec<Q>>, String> {
    match f0 {
        Some(v) => Ok(vec![v]),
        None => admissible_initial(sys).map_err(mahler_input_error),
    }
}

/// Solve from `f0`; `Ok(Err(outcome))` is a mathematical failure.
fn solve_checked(name: &str, sys: &MahlerSystem, f0: &[Q], order: usize) -> Checked<SeriesSolution> {
    match solve_series(sys, f0, order) {
        Ok(s) => Ok(Ok(s)),
        Err(MahlerError::NotAdmissible { residual }) => {
            let summary = format!("f0 = ({}) is not admissible: (A(0) - I) f0 = ({})", rationals(f0).join(", "), residual.join(", "));
            let data = json!({ "system": system_json(sys), "initial": rationals(f0), "admissible": false, "residual": residual });
            Ok(Err(Outcome::new(name, Status::Fail, summary, data, Vec::new())))
        }
        Err(e) => Err(mahler_input_error(e)),
    }
}

fn mahler_solve(name: &str, path: &Path, order: usize) -> CmdResult {
    let (sys, f0) = load_mahler(path)?;
    let inits = initial_vectors(&sys, f0)?;
    let mut sols = Vec::new();
    let mut lines = Vec::new();
    let mut all_zero = true;
    for v in &inits {
        let sol = match solve_checked(name, &sys, v, order)? {
            Ok(s) => s,
            Err(outcome) => return Ok(outcome),
        };
        let res = residual(&sys, &sol).map_err(mahler_input_error)?;
        let zero = res.iter().all(TruncSeries::is_zero);
        all_zero &= zero;
        lines.push(format!("f(0) = ({})", rationals(v).join(", ")));
        for (i, c) in sol.components.iter().enumerate() {
            lines.push(format!("  f_{} = {}", i + 1, series_head(c)));
        }
        sols.push(json!({
            "initial": rationals(v),
            "components": sol.components.iter().map(series_coeffs).collect::<Vec<_>>(),
            "residual_zero": zero,
        }));
    }
    let summary = if inits.is_empty() {
        "no nonzero power-series solution: A(0) - I is invertible".to_string()
    } else if all_zero {
        format!("{} solution(s) to order {order}; residual d*f - P*f(z^q) = 0 mod z^{order}", inits.len())
    } else {
        format!("residual nonzero mod z^{order}")
    };
    let data = json!({ "system": system_json(&sys), "order": order, "solutions": sols });
    Ok(Outcome::new(name, status(all_zero), summary, data, lines))
}

fn pole_str(k: PoleKind) -> &'static str {
    match k {
        PoleKind::APole => "pole of A",
        PoleKind::AInversePole => "pole of A^-1",
    }
}

fn orbit_point(alpha: &Q, q: u64, r: u64) -> Q {
    let mut x = alpha.clone();
    for _ in 0..r {
        x = num_traits::pow(x, q as usize);
    }
    x
}

fn verdict_json(v: &SingularityVerdict, alpha: &Q, q: u64) -> Json {
    json!({
        "alpha": alpha.to_string(),
        "singular": v.singular,
        "witness": v.witness.map(|(r, k)| json!({ "r": r, "kind": pole_str(k), "point": orbit_point(alpha, q, r).to_string() })),
        "scan_bound": v.scan_bound.to_string(),
        "steps": v.steps,
    })
}

fn verdict_summary(v: &SingularityVerdict, alpha: &Q, q: u64) -> String {
    match v.witness {
        Some((r, k)) => format!("alpha = {alpha} is singular: witness r = {r}, alpha^(q^r) = {} is a {}", orbit_point(alpha, q, r), pole_str(k)),
        None => format!("alpha = {alpha} is not singular: orbit drops below root bound {} after {} steps", v.scan_bound, v.steps),
    }
}

fn mahler_singular(name: &str, path: &Path, alpha: &str) -> CmdResult {
    let (sys, _) = load_mahler(path)?;
    let alpha = parse_rational(alpha)?;
    let v = singularity_check(&sys, &alpha).map_err(mahler_input_error)?;
    let data = json!({ "system": system_json(&sys), "verdict": verdict_json(&v, &alpha, sys.q()) });
    Ok(Outcome::new(name, Status::Pass, verdict_summary(&v, &alpha, sys.q()), data, Vec::new()))
}

/// The unique solution selected by `f0`, or by a one-dimensional admissible space.
fn unique_solution(name: &str, sys: &MahlerSystem, f0: Option<Vec<Q>>, order: usize) -> Checked<SeriesSolution> {
    let inits = initial_vectors(sys, f0)?;
    match inits.as_slice() {
        [v] => solve_checked(name, sys, v, order),
        _ => Err(format!("{} admissible initial vectors; give f0[i] in the system file", inits.len())),
    }
}

fn mahler_eval(name: &str, path: &Path, alpha: &str, order: usize, steps: u32) -> CmdResult {
    let (sys, f0) = load_mahler(path)?;
    let alpha = parse_rational(alpha)?;
    let sol = match unique_solution(name, &sys, f0, order)? {
        Ok(s) => s,
        Err(outcome) => return Ok(outcome),
    };
    match evaluate_at_point(&sys, &sol, &alpha, steps) {
        Ok(vals) => {
            let lines = vals.iter().enumerate().map(|(i, v)| format!("f_{}({alpha}) = {:.15} +/- {:.1e}", i + 1, v.value, v.error)).collect();
            let data = json!({
                "system": system_json(&sys),
                "alpha": alpha.to_string(),
                "order": order,
                "steps": steps,
                "initial": rationals(&sol.coefficient(0)),
                "values": vals.iter().map(|v| json!({ "value": v.value, "error": v.error })).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(name, Status::Pass, format!("evaluated {} component(s) at alpha = {alpha}", vals.len()), data, lines))
        }
        Err(MahlerError::Singular(v)) => {
            let data = json!({ "system": system_json(&sys), "verdict": verdict_json(&v, &alpha, sys.q()) });
            Ok(Outcome::new(name, Status::Fail, format!("refusing to evaluate: {}", verdict_summary(&v, &alpha, sys.q())), data, Vec::new()))
        }
        Err(e) => Err(mahler_input_error(e)),
    }
}

// ---- relations ----

enum Source {
    Functions(Vec<RatFun<Q>>),
    Mahler(MahlerSystem, SeriesSolution),
}

fn load_series(name: &str, src: &SeriesSource) -> Checked<(Source, Vec<TruncSeries<Q>>)> {
    let sf = read_system(&src.file)?;
    let ctx = |e: crate::sysfile::SysFileError| format!("{}: {e}", src.file.display());
    if src.order <= 0 {
        return Err("--order must be positive".into());
    }
    match sf.kind() {
        Some("mahler") => {
            let (sys, f0) = sf.mahler().map_err(ctx)?;
            let sol = match unique_solution(name, &sys, f0, src.order as usize)? {
                Ok(s) => s,
                Err(o) => return Ok(Err(o)),
            };
            let series = sol.components.clone();
            Ok(Ok((Source::Mahler(sys, sol), series)))
        }
        _ => {
            let fs = sf.functions().map_err(ctx)?;
            let series = fs.iter().map(|f| TruncSeries::from_ratfun(f, src.order)).collect();
            Ok(Ok((Source::Functions(fs), series)))
        }
    }
}

fn relation_basis(src: &SeriesSource, series: &[TruncSeries<Q>]) -> Result<RelationBasis, String> {
    let input = if src.z { with_z_variable(series, src.order) } else { series.to_vec() };
    find_relations_with(&input, src.deg, src.order, src.z, Execution::default()).map_err(|e| e.to_string())
}

fn variables(n: usize, z: bool) -> Vec<String> {
    let first = usize::from(!z);
    (first..first + n + usize::from(z)).map(|i| format!("X{i}")).collect()
}

fn basis_json(b: &RelationBasis, vars: &[String]) -> Json {
    json!({
        "degree": b.degree,
        "order": b.order,
        "variables": vars,
        "monomial_count": b.monomial_count,
        "rank": b.rank,
        "dimension": b.dimension(),
        "relations": b.basis.iter().map(|r| r.render()).collect::<Vec<_>>(),
        "under_determined": b.under_determined(),
        "warning": b.warning,
    })
}

fn relations_find(name: &str, src: &SeriesSource) -> CmdResult {
    let (_, series) = match load_series(name, src)? {
        Ok(x) => x,
        Err(o) => return Ok(o),
    };
    let b = relation_basis(src, &series)?;
    let vars = variables(series.len(), src.z);
    let mut lines: Vec<String> = b.basis.iter().map(|r| format!("{r} = 0")).collect();
    if let Some(w) = &b.warning {
        lines.push(format!("warning: {w}"));
    }
    let summary = format!("{} independent relation(s) of degree <= {} mod z^{}", b.dimension(), src.deg, src.order);
    Ok(Outcome::new(name, Status::Pass, summary, basis_json(&b, &vars), lines))
}

fn parse_value(s: &str) -> Result<Value, String> {
    if let Ok(q) = Q::from_str(s.trim()) {
        return Ok(Value::Exact(q));
    }
    s.trim().parse::<f64>().map(Value::Float).map_err(|_| format!("'{s}' is neither a rational nor a decimal number"))
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(q) => json!(q.to_string()),
        Value::Float(x) => json!(x),
    }
}

fn relations_specialize(name: &str, src: &SeriesSource, alpha: Option<&str>, values: &[String], tol: f64, steps: u32) -> CmdResult {
    let (source, series) = match load_series(name, src)? {
        Ok(x) => x,
        Err(o) => return Ok(o),
    };
    let b = relation_basis(src, &series)?;
    let vars = variables(series.len(), src.z);
    let vals: Vec<Value> = match (alpha, values.is_empty()) {
        (Some(a), true) => {
            let alpha = parse_rational(a)?;
            let mut vals = Vec::new();
            if src.z {
                vals.push(Value::Exact(alpha.clone()));
            }
            match &source {
                Source::Functions(fs) => {
                    for (i, f) in fs.iter().enumerate() {
                        let v = f.evaluate(&alpha).map_err(|_| format!("f[{}] has a pole at {alpha}", i + 1))?;
                        vals.push(Value::Exact(v));
                    }
                }
                Source::Mahler(sys, sol) => match evaluate_at_point(sys, sol, &alpha, steps) {
                    Ok(pv) => vals.extend(pv.iter().map(|v| Value::Float(v.value))),
                    Err(MahlerError::Singular(v)) => {
                        let data = json!({ "verdict": verdict_json(&v, &alpha, sys.q()), "relations": basis_json(&b, &vars) });
                        return Ok(Outcome::new(name, Status::Fail, format!("cannot specialize: {}", verdict_summary(&v, &alpha, sys.q())), data, Vec::new()));
                    }
                    Err(e) => return Err(mahler_input_error(e)),
                },
            }
            vals
        }
        (None, false) => values.iter().map(|s| parse_value(s)).collect::<Result<_, _>>()?,
        (None, true) => return Err("give --alpha or --values".into()),
        (Some(_), false) => unreachable!("clap rejects --alpha with --values"),
    };
    if vals.len() != vars.len() {
        return Err(format!("expected {} values ({}), got {}", vars.len(), vars.join(", "), vals.len()));
    }
    let mut all = true;
    let mut rels = Vec::new();
    let mut lines = Vec::new();
    for r in &b.basis {
        let s = specialize_check(r, &vals, tol).map_err(|e| e.to_string())?;
        all &= s.holds;
        let (res, shown) = match &s.residual {
            Residual::Exact(q) => (json!(q.to_string()), q.to_string()),
            Residual::Float(x) => (json!(x), format!("{x:e}")),
        };
        lines.push(format!("{r}: residual {shown} ({})", if s.holds { "holds" } else { "fails" }));
        rels.push(json!({ "relation": r.render(), "holds": s.holds, "residual": res }));
    }
    let shown: Vec<String> = vals
        .iter()
        .map(|v| match v {
            Value::Exact(q) => q.to_string(),
            Value::Float(x) => x.to_string(),
        })
        .collect();
    let summary = match (b.basis.len(), all) {
        (0, _) => "no relations found to specialize".to_string(),
        (n, true) => format!("all {n} relation(s) hold at ({})", shown.join(", ")),
        (n, false) => format!("{} of {n} relation(s) fail at ({})", rels.iter().filter(|r| r["holds"] == false).count(), shown.join(", ")),
    };
    let data = json!({
        "basis": basis_json(&b, &vars),
        "values": vals.iter().map(value_json).collect::<Vec<_>>(),
        "tolerance": tol,
        "specializations": rels,
    });
    Ok(Outcome::new(name, status(all), summary, data, lines))
}
