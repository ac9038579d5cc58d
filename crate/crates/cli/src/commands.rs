use std::f64::consts::PI;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riemann_sums::arith::{
    coprime_fraction, derangement_bound_holds, derangement_stats, iep_mobius_identity_check,
    iep_odd_identity_check, inverse_e_enclosure, zeta, BallFunction, BoxFunction, LatticeFunction,
    PrimitivePoints, PrimitiveSetKind, TableFunction,
};
use riemann_sums::fourier::{
    poisson_check_auto, prim_expansion, prim_poisson_check, qc_spectrum, twisted_density_check,
    CutProjectScheme, Gaussian, Lattice, ModelSet,
};
use riemann_sums::pythagoras::{
    enumerate_ppt, equidistribution_stat, expected_arc_count, fermat_characterization_check,
    load_triple_table, nth_ppt, sector_count, sector_density,
};
use riemann_sums::riemann::{
    ball_volume, estimate_density, halving_schedule, DensityEstimate, IntegerLattice, PointSource,
    TestFunction,
};
use riemann_sums::Error;

use crate::args::*;
use crate::report::{Cell, Check, Report};

pub type Result<T> = std::result::Result<T, Error>;

pub fn run(cmd: &Command, seed: u64) -> Result<Report> {
    match cmd {
        Command::Density(a) => density(a),
        Command::Coprime(a) => coprime(a),
        Command::Ppt(a) => ppt(a),
        Command::Lehmer(a) => lehmer(a),
        Command::Sector(a) => sector(a),
        Command::Equidist(a) => equidist(a),
        Command::Fermat(a) => fermat(a),
        Command::Iep(a) => iep(a, seed),
        Command::Derange(a) => derange(a),
        Command::Poisson(a) => poisson(a),
        Command::Modelset(a) => modelset(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Primqc(a) => primqc(a),
        Command::Twisted(a) => twisted(a),
    }
}

fn test_function(f: &FunctionArgs, dim: usize) -> Result<TestFunction> {
    match f.shape {
        Shape::Ball => TestFunction::ball(vec![0.0; dim], f.radius),
        Shape::Bump => TestFunction::bump(vec![0.0; dim], f.radius),
        Shape::Box => TestFunction::box_indicator(vec![-f.radius; dim], vec![f.radius; dim]),
    }
}

fn schedule(s: &ScheduleArgs) -> Result<Vec<f64>> {
    halving_schedule(s.eps_start, s.eps_min)
}

fn density_rows(est: &DensityEstimate) -> Report {
    let mut r = Report::new(&["eps", "sum_re", "sum_im", "density_re", "density_im"]);
    for ((e, s), d) in est.epsilons.iter().zip(&est.scaled_sums).zip(&est.density_samples) {
        r.push(vec![(*e).into(), s.re.into(), s.im.into(), d.re.into(), d.im.into()]);
    }
    r
}

fn scheme(a: &SchemeArgs) -> Result<CutProjectScheme> {
    let s = match &a.scheme {
        Some(path) => CutProjectScheme::load(path)?,
        None => CutProjectScheme::fibonacci(),
    };
    if let Some(w) = s.density_warning() {
        let _ = writeln!(std::io::stderr(), "warning: {w}");
    }
    Ok(s)
}

fn density(a: &DensityArgs) -> Result<Report> {
    let eps = schedule(&a.schedule)?;
    let (src, expected): (Box<dyn PointSource>, f64) = match a.set {
        SetName::Prim(d) => {
            let expected = if d >= 2 { 1.0 / zeta(d as u32, 1e-15)? } else { 0.0 };
            (Box::new(PrimitivePoints::new(PrimitiveSetKind::Prim(d))?), expected)
        }
        SetName::Star => (Box::new(PrimitivePoints::new(PrimitiveSetKind::PrimStar)?), 4.0 / (PI * PI)),
        SetName::Odd => (Box::new(PrimitivePoints::new(PrimitiveSetKind::OddPrim)?), 2.0 / (PI * PI)),
        SetName::Integer(d) => (Box::new(IntegerLattice::new(d)?), 1.0),
        SetName::Fibonacci => {
            let s = CutProjectScheme::fibonacci();
            let expected = s.density();
            (Box::new(ModelSet::new(s)), expected)
        }
    };
    let f = test_function(&a.function, src.dimension())?;
    let est = estimate_density(&f, src.as_ref(), &eps)?;
    let mut r = density_rows(&est);
    let actual = est.extrapolated.re;
    r.checks.push(if expected == 0.0 {
        Check::below("density", actual, a.tol)
    } else {
        Check::relative("density", expected, actual, a.tol)
    });
    Ok(r)
}

fn coprime(a: &CoprimeArgs) -> Result<Report> {
    let target = 6.0 / (PI * PI);
    let mut r = Report::new(&["N", "numerator", "denominator", "fraction", "rel_err"]);
    let mut last = None;
    for &n in &a.n {
        let q: Ratio<u64> = coprime_fraction(n)?;
        let v = *q.numer() as f64 / *q.denom() as f64;
        r.push(vec![n.into(), (*q.numer()).into(), (*q.denom()).into(), v.into(), ((v - target) / target).abs().into()]);
        last = Some(v);
    }
    if let Some(v) = last {
        r.checks.push(Check::relative("coprime_fraction", target, v, a.tol));
    }
    Ok(r)
}

fn ppt(a: &PptArgs) -> Result<Report> {
    let list = enumerate_ppt(a.zmax);
    let mut r = Report::new(&["N", "x", "y", "z"]);
    for (i, t) in list.iter().enumerate() {
        r.push(vec![(i + 1).into(), t.x.into(), t.y.into(), t.z.into()]);
    }
    if let Some(path) = &a.golden {
        let rows = load_triple_table(path)?;
        let bad = rows
            .iter()
            .filter(|row| match row.index.checked_sub(1).and_then(|i| list.get(i)) {
                Some(t) => (t.x, t.y, t.z) != (row.x, row.y, row.z),
                None => true,
            })
            .count();
        r.checks.push(Check::absolute("golden_mismatches", 0.0, bad as f64, 0.0));
    }
    Ok(r)
}

fn lehmer(a: &LehmerArgs) -> Result<Report> {
    let mut r = Report::new(&["N", "z", "ratio"]);
    for &n in &a.n {
        let t = nth_ppt(n)?;
        r.push(vec![n.into(), t.z.into(), (t.z as f64 / n as f64).into()]);
    }
    Ok(r)
}

fn sector(a: &SectorArgs) -> Result<Report> {
    let count = sector_count(a.bound, a.alpha, a.beta)?;
    let ratio = count as f64 / a.bound as f64;
    let expected = sector_density(a.alpha, a.beta);
    let mut r = Report::new(&["N", "alpha", "beta", "count", "ratio", "expected"]);
    r.push(vec![a.bound.into(), a.alpha.into(), a.beta.into(), count.into(), ratio.into(), expected.into()]);
    r.checks.push(Check::relative("sector_ratio", expected, ratio, a.tol));
    Ok(r)
}

fn equidist(a: &EquidistArgs) -> Result<Report> {
    let s = equidistribution_stat(a.theta1, a.theta2, a.hmax)?;
    let expected_count = expected_arc_count(a.theta2 - a.theta1, a.hmax);
    let mut r = Report::new(&["h_max", "theta1", "theta2", "count", "total", "ratio", "expected_count", "expected_ratio"]);
    r.push(vec![
        a.hmax.into(),
        a.theta1.into(),
        a.theta2.into(),
        s.count.into(),
        s.total.into(),
        s.ratio.into(),
        expected_count.into(),
        s.expected.into(),
    ]);
    r.checks.push(Check::relative("arc_count", expected_count, s.count as f64, a.tol));
    r.checks.push(Check::relative("arc_ratio", s.expected, s.ratio, a.tol));
    Ok(r)
}

fn fermat(a: &FermatArgs) -> Result<Report> {
    let rep = fermat_characterization_check(a.zmax)?;
    let mut r = Report::new(&["z", "expected", "observed"]);
    for m in &rep.mismatches {
        r.push(vec![m.z.into(), m.expected.into(), m.observed.into()]);
    }
    r.checks.push(Check::absolute("mismatches", 0.0, rep.mismatches.len() as f64, 0.0));
    Ok(r)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-50..=50)), BigInt::from(rng.gen_range(1..=30)))
}

/// Random point table, box or ball with support radius at most 20.
fn random_function(rng: &mut ChaCha8Rng, dim: usize) -> (&'static str, Box<dyn LatticeFunction>) {
    let reach: i64 = if dim == 2 { 14 } else { 8 };
    match rng.gen_range(0..3) {
        0 => {
            let mut f = TableFunction::new(dim);
            for _ in 0..rng.gen_range(1..=12) {
                let z: Vec<i64> = (0..dim).map(|_| rng.gen_range(-reach..=reach)).collect();
                f.set(z, random_rational(rng));
            }
            ("table", Box::new(f))
        }
        1 => {
            let lo: Vec<i64> = (0..dim).map(|_| rng.gen_range(-reach..=reach)).collect();
            let hi: Vec<i64> = lo.iter().map(|&a| (a + rng.gen_range(0..=reach)).min(reach)).collect();
            ("box", Box::new(BoxFunction::weighted(lo, hi, random_rational(rng)).expect("valid box")))
        }
        _ => (
            "ball",
            Box::new(BallFunction {
                center: (0..dim).map(|_| rng.gen_range(-reach / 2..=reach / 2)).collect(),
                radius_sq: rng.gen_range(0..=(reach * reach / 4) as u64),
                weight: random_rational(rng),
            }),
        ),
    }
}

fn iep(a: &IepArgs, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new(&[
        "trial",
        "dim",
        "kind",
        "support_radius",
        "mobius_lhs",
        "mobius_rhs",
        "mobius_equal",
        "odd_lhs",
        "odd_rhs",
        "odd_equal",
    ]);
    let mut unequal = 0u64;
    for i in 0..a.trials {
        let dim = match a.dim {
            Some(d) => d as usize,
            None if i % 4 == 3 => 3,
            None => 2,
        };
        let (kind, f) = random_function(&mut rng, dim);
        let m = iep_mobius_identity_check(f.as_ref())?;
        unequal += u64::from(!m.equal);
        let mut row = vec![
            (i + 1).into(),
            dim.into(),
            kind.into(),
            f.support_radius().into(),
            m.lhs.to_string().into(),
            m.rhs.to_string().into(),
            m.equal.into(),
        ];
        if dim == 2 {
            let o = iep_odd_identity_check(f.as_ref())?;
            unequal += u64::from(!o.equal);
            row.extend([o.lhs.to_string().into(), o.rhs.to_string().into(), o.equal.into()]);
        } else {
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
        }
        r.push(row);
    }
    r.checks.push(Check::absolute("unequal_identities", 0.0, unequal as f64, 0.0));
    Ok(r)
}

fn derange(a: &DerangeArgs) -> Result<Report> {
    let (lo, hi) = inverse_e_enclosure(a.n_max + 40);
    let inv_e = (lo + hi) / BigInt::from(2);
    let mut r = Report::new(&["n", "derangements", "probability", "distance_to_inv_e", "bound", "holds"]);
    let mut violations = 0u64;
    let mut fact = BigInt::from(1);
    for n in 0..=a.n_max {
        let s = derangement_stats(n);
        fact *= n + 1;
        let dist = (&s.probability - &inv_e).abs();
        let holds = derangement_bound_holds(n);
        violations += u64::from(!holds);
        let count = match s.count.to_i128() {
            Some(c) => Cell::Int(c),
            None => Cell::Text(s.count.to_string()),
        };
        r.push(vec![
            u64::from(n).into(),
            count,
            to_f64(&s.probability).into(),
            to_f64(&dist).into(),
            (1.0 / fact.to_f64().unwrap_or(f64::INFINITY)).into(),
            holds.into(),
        ]);
    }
    r.checks.push(Check::absolute("bound_violations", 0.0, violations as f64, 0.0));
    Ok(r)
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn poisson(a: &PoissonArgs) -> Result<Report> {
    let d = a.dim as usize;
    let eta = if a.eta.is_empty() { vec![0.0; d] } else { a.eta.clone() };
    if eta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: eta.len(),
        });
    }
    let lattice = Lattice::integer(d)?;
    let mut r = Report::new(&["t", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err"]);
    let mut worst: f64 = 0.0;
    for &t in &a.t {
        let g = Gaussian::new(d, t)?;
        let c = poisson_check_auto(&g, &lattice, &eta)?;
        worst = worst.max(c.abs_err);
        r.push(vec![t.into(), c.lhs.re.into(), c.lhs.im.into(), c.rhs.re.into(), c.rhs.im.into(), c.abs_err.into()]);
    }
    r.checks.push(Check::below("max_abs_err", worst, a.tol));
    Ok(r)
}

fn indexed(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn modelset(a: &ModelsetArgs) -> Result<Report> {
    let s = scheme(&a.scheme)?;
    let p = s.physical_dim();
    let pts = s.points_within(a.radius)?;
    let mut r = Report::with_columns(indexed("x", p));
    for x in &pts {
        r.push(x.iter().map(|&v| v.into()).collect());
    }
    let counted = pts.len() as f64 / ball_volume(p, a.radius);
    r.checks.push(Check::relative("counted_density", s.density(), counted, a.tol));
    Ok(r)
}

fn spectrum(a: &SpectrumArgs) -> Result<Report> {
    let s = scheme(&a.scheme)?;
    let peaks = qc_spectrum(&s, a.cutoff, a.floor)?;
    let mut cols = indexed("xi", s.physical_dim());
    cols.extend(indexed("xi_int", s.internal_dim()));
    cols.extend(["amplitude_re", "amplitude_im", "abs_amplitude"].map(String::from));
    cols.extend(indexed("k", s.total_dim()));
    let mut r = Report::with_columns(cols);
    for e in &peaks {
        let mut row: Vec<Cell> = e.xi.iter().chain(&e.xi_internal).map(|&v| v.into()).collect();
        row.extend([e.amplitude.re.into(), e.amplitude.im.into(), e.amplitude.norm().into()]);
        row.extend(e.coeffs.iter().map(|&k| k.into()));
        r.push(row);
    }
    let a0 = peaks
        .iter()
        .find(|e| e.coeffs.iter().all(|&k| k == 0))
        .map_or(0.0, |e| e.amplitude.re);
    r.checks.push(Check::absolute("zero_amplitude", s.density(), a0, 1e-12));
    Ok(r)
}

fn primqc(a: &PrimqcArgs) -> Result<Report> {
    let d = a.dim as usize;
    if a.cutoff.is_empty() {
        return Err(Error::InvalidArgument {
            name: "cutoff",
            reason: "need at least one cutoff".into(),
        });
    }
    if a.list {
        let exp = prim_expansion(d, a.n, a.cutoff[0])?;
        let mut cols = indexed("xi", d);
        cols.extend(["n_xi", "a_n", "a_limit"].map(String::from));
        let mut r = Report::with_columns(cols);
        for e in &exp.entries {
            let mut row: Vec<Cell> = e.xi.iter().map(|q| q.to_string().into()).collect();
            row.extend([e.n_xi.into(), e.a_n.into(), e.a_limit.into()]);
            r.push(row);
        }
        return Ok(r);
    }
    let f = TestFunction::bump(vec![0.0; d], a.radius)?;
    let mut r = Report::new(&["cutoff", "lhs", "rhs", "abs_err", "terms", "tail_estimate"]);
    let mut errs = Vec::new();
    let mut lhs = 0.0;
    for &c in &a.cutoff {
        let p = prim_poisson_check(d, &f, a.n, c)?;
        errs.push(p.abs_err);
        lhs = p.lhs;
        r.push(vec![c.into(), p.lhs.into(), p.rhs.into(), p.abs_err.into(), p.terms.into(), p.tail_estimate.into()]);
    }
    let increases = errs.windows(2).filter(|w| w[1] >= w[0]).count();
    r.checks.push(Check::absolute("non_decreasing_steps", 0.0, increases as f64, 0.0));
    let last = *errs.last().unwrap();
    r.checks.push(Check::below("final_rel_err", last / lhs.abs(), a.tol));
    Ok(r)
}

fn twisted(a: &TwistedArgs) -> Result<Report> {
    let f = test_function(&a.function, a.eta.len())?;
    let t = twisted_density_check(a.eta.clone(), &f, &schedule(&a.schedule)?)?;
    let mut r = density_rows(&t.estimate);
    r.checks.push(Check::relative("twisted_density", t.a_limit, t.estimate.extrapolated.re, a.tol));
    Ok(r)
}
