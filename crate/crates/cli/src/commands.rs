use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use starprod_core::classical::{classical_inverse_many, classical_tomogram_grid, PhaseDistribution};
use starprod_core::fock::interior_block;
use starprod_core::io::{operator_table, parse_complex, read_symbol_grid, symbol_table, Format, StateSpec, Table};
use starprod_core::maps::{photon_from_symplectic, OpticalQuadrature, OpticalSamples, OpticalTransform};
use starprod_core::photon::{photon_kernel_closed, photon_kernel_trace, photon_tomogram};
use starprod_core::scheme::{kernel_by_trace_ordered, KernelOrder};
use starprod_core::symplectic::{tomogram_grid, TomographicKernel};
use starprod_core::verify::KernelFamily;
use starprod_core::wigner::{groenewold_kernel, wigner_function, wigner_normalization};
use starprod_core::{
    init_thread_pool_from_env, run_suite, Axis, Error, LabelPoint, Measure, PhaseGrid, PhotonConfig, PhotonGrid,
    PhotonScheme, QuantumState, Scheme, Suite, SymbolGrid, SymplecticGrid, SymplecticScheme, VerifyOptions,
    WignerScheme, C64,
};

use crate::{Frames, Global};

pub type Result = std::result::Result<Outcome, Error>;

const DEFAULT_DIM: usize = 32;

/// What a command leaves behind besides its output file.
#[derive(Debug, Default)]
pub struct Outcome {
    warnings: Vec<String>,
    failed: bool,
}

impl Outcome {
    fn warn(&mut self, msg: String) {
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }

    pub fn exit_code(&self, strict: bool) -> ExitCode {
        for w in &self.warnings {
            log::warn!("{w}");
        }
        if self.failed {
            ExitCode::from(1)
        } else if strict && !self.warnings.is_empty() {
            ExitCode::from(3)
        } else {
            ExitCode::SUCCESS
        }
    }
}

pub fn init(g: &Global) -> std::result::Result<(), Error> {
    if let Some(d) = g.dim {
        if d < 2 {
            return Err(Error::InvalidDimension { dim: d, min: 2 });
        }
    }
    if let Some(t) = g.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance {t} must be positive")));
        }
    }
    init_thread_pool_from_env()?;
    Ok(())
}

fn dim(g: &Global) -> usize {
    g.dim.unwrap_or(DEFAULT_DIM)
}

fn tol(g: &Global, default: f64) -> f64 {
    g.tolerance.unwrap_or(default)
}

fn format(g: &Global, fallback: Format) -> Format {
    g.format.unwrap_or_else(|| g.output.as_deref().map(Format::from_path).unwrap_or(fallback))
}

fn sink(g: &Global) -> std::result::Result<Box<dyn Write>, Error> {
    Ok(match &g.output {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(g: &Global, table: &Table) -> std::result::Result<(), Error> {
    let mut out = sink(g)?;
    table.write(&mut out, format(g, Format::Csv))?;
    out.flush()?;
    Ok(())
}

fn state(g: &Global, spec: &str) -> std::result::Result<QuantumState, Error> {
    spec.parse::<StateSpec>()?.build(dim(g))
}

fn check_cutoff(g: &Global, rho: &QuantumState, out: &mut Outcome) {
    let block = interior_block(rho.dim());
    let tail = rho.tail_population(block);
    if tail > tol(g, 1e-3) {
        out.warn(format!("population {tail:.3e} outside the first {block} levels; cutoff {} is too small", rho.dim()));
    }
}

fn check_normalization(g: &Global, norm: f64, what: &str, out: &mut Outcome) {
    if (norm - 1.0).abs() > tol(g, 1e-3) {
        out.warn(format!("{what} normalization {norm} differs from 1"));
    }
}

fn floats(s: &str, n: usize) -> std::result::Result<Vec<f64>, Error> {
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(Error::InvalidConfig(format!("expected {n} comma-separated numbers, got '{s}'"))),
    }
}

fn frames_measure(f: &Frames) -> std::result::Result<(Measure, bool), Error> {
    if let Some(spec) = &f.polar {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::InvalidConfig(format!("polar grid '{spec}' is not radial:radius:angles"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let radial: usize = parts[0].trim().parse().map_err(|_| bad())?;
        let radius: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let angles: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if radial == 0 || angles == 0 || radius.is_nan() || radius <= 0.0 {
            return Err(bad());
        }
        return Ok((SymplecticGrid::Polar { radial, radius, angles, xi: f.x }.measure(), false));
    }
    let labels = f.x.nodes().into_iter().map(|x| LabelPoint::symplectic(x, f.mu, f.nu)).collect();
    Ok((Measure::new(labels, f.x.weights(), format!("frame ({}, {}), X {}", f.mu, f.nu, f.x))?, true))
}

fn with_meta(mut t: Table, meta: &[(&str, String)]) -> Table {
    for (k, v) in meta {
        t.metadata.insert(k.to_string(), v.clone());
    }
    t
}

pub fn wigner(g: &Global, spec: &str, q: Axis, p: Axis) -> Result {
    let mut out = Outcome::default();
    let rho = state(g, spec)?;
    let w = wigner_function(&rho, &PhaseGrid::new(q, p))?;
    let norm = wigner_normalization(&w);
    check_cutoff(g, &rho, &mut out);
    check_normalization(g, norm.re, "Wigner", &mut out);
    let meta = [("state", spec.to_string()), ("dim", rho.dim().to_string()), ("normalization", norm.re.to_string())];
    emit(g, &with_meta(symbol_table(&w), &meta))?;
    Ok(out)
}

pub fn tomogram_symplectic(g: &Global, spec: &str, frames: &Frames) -> Result {
    let mut out = Outcome::default();
    let rho = state(g, spec)?;
    let (measure, single) = frames_measure(frames)?;
    let w = tomogram_grid(&rho, Arc::new(measure))?;
    check_cutoff(g, &rho, &mut out);
    let mut meta = vec![("state", spec.to_string()), ("dim", rho.dim().to_string())];
    if single {
        let norm = w.integral().re;
        check_normalization(g, norm, "tomogram", &mut out);
        meta.push(("normalization", norm.to_string()));
    }
    emit(g, &with_meta(symbol_table(&w), &meta))?;
    Ok(out)
}

pub fn tomogram_optical(g: &Global, spec: &str, theta: f64, x: Axis) -> Result {
    let mut out = Outcome::default();
    let rho = state(g, spec)?;
    let labels = x.nodes().into_iter().map(|v| LabelPoint::optical(v, theta)).collect();
    let measure = Measure::new(labels, x.weights(), format!("optical theta {theta}, X {x}"))?;
    let w = tomogram_grid(&rho, Arc::new(measure))?;
    let norm = w.integral().re;
    check_cutoff(g, &rho, &mut out);
    check_normalization(g, norm, "optical tomogram", &mut out);
    let meta = [
        ("state", spec.to_string()),
        ("dim", rho.dim().to_string()),
        ("theta", theta.to_string()),
        ("normalization", norm.to_string()),
    ];
    emit(g, &with_meta(symbol_table(&w), &meta))?;
    Ok(out)
}

pub fn tomogram_photon(g: &Global, spec: &str, alpha: &str, nmax: usize) -> Result {
    let mut out = Outcome::default();
    let rho = state(g, spec)?;
    let alpha = parse_complex(alpha)?;
    let mut values = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        values.push(C64::new(photon_tomogram(&rho, n, alpha)?, 0.0));
    }
    let labels = (0..=nmax).map(|n| LabelPoint::photon(n, alpha)).collect();
    let grid = SymbolGrid::new(Arc::new(Measure::new(labels, vec![1.0; nmax + 1], format!("n <= {nmax}"))?), values)?;
    check_cutoff(g, &rho, &mut out);
    let meta = [
        ("state", spec.to_string()),
        ("dim", rho.dim().to_string()),
        ("normalization", grid.integral().re.to_string()),
    ];
    emit(g, &with_meta(symbol_table(&grid), &meta))?;
    Ok(out)
}

fn relative_gap(closed: C64, trace: C64) -> f64 {
    (closed - trace).norm() / closed.norm().max(trace.norm()).max(f64::MIN_POSITIVE)
}

pub fn kernel_wigner(g: &Global, args: [&String; 3]) -> Result {
    let mut out = Outcome::default();
    let x: Vec<Vec<f64>> = args.iter().map(|s| floats(s, 2)).collect::<std::result::Result<_, _>>()?;
    let labels: Vec<LabelPoint> = x.iter().map(|v| LabelPoint::phase(v[0], v[1])).collect();
    let scheme = WignerScheme::new(dim(g), PhaseGrid::square(1.0, 3)?)?;
    let trace = kernel_by_trace_ordered(&scheme, KernelOrder::Forward, &labels[0], &labels[1], &labels[2])?.value;
    let closed = groenewold_kernel(x[0][0], x[0][1], x[1][0], x[1][1], x[2][0], x[2][1]);
    let gap = relative_gap(closed, trace);
    if gap > tol(g, 1e-3) {
        out.warn(format!("Groenewold kernel and trace at cutoff {} differ by relative {gap:.3e}", dim(g)));
    }
    let mut t = Table::new(&["q1", "p1", "q2", "p2", "q3", "p3", "re", "im", "trace_re", "trace_im"])
        .with_meta("dim", dim(g))
        .with_meta("order", "Tr(Q(x1) Q(x2) U(x3))");
    t.push(x.concat().into_iter().chain([closed.re, closed.im, trace.re, trace.im]).collect());
    emit(g, &t)?;
    Ok(out)
}

pub fn kernel_symplectic(g: &Global, args: [&String; 3]) -> Result {
    let x: Vec<Vec<f64>> = args.iter().map(|s| floats(s, 3)).collect::<std::result::Result<_, _>>()?;
    let tr = |v: &Vec<f64>| (v[0], v[1], v[2]);
    let (x1, x2, x3) = (tr(&x[0]), tr(&x[1]), tr(&x[2]));
    let quantum = TomographicKernel::QUANTUM.smooth_factor(x1, x2, x3)?;
    let classical = TomographicKernel::CLASSICAL.smooth_factor(x1, x2, x3)?;
    let constraint = TomographicKernel::constraint(x1, x2, x3);
    let mut t = Table::new(&[
        "X1", "mu1", "nu1", "X2", "mu2", "nu2", "X3", "mu3", "nu3", "constraint", "quantum_re", "quantum_im",
        "classical_re", "classical_im",
    ])
    .with_meta("kernel", "delta(constraint) times smooth factor");
    t.push(x.concat().into_iter().chain([constraint, quantum.re, quantum.im, classical.re, classical.im]).collect());
    emit(g, &t)?;
    Ok(Outcome::default())
}

pub fn kernel_photon(g: &Global, s: f64, args: [&String; 3]) -> Result {
    let mut out = Outcome::default();
    let x: Vec<Vec<f64>> = args.iter().map(|a| floats(a, 3)).collect::<std::result::Result<_, _>>()?;
    let mut labels = Vec::with_capacity(3);
    for v in &x {
        if v[0] < 0.0 || v[0].fract() != 0.0 {
            return Err(Error::InvalidConfig(format!("photon number {} is not a nonnegative integer", v[0])));
        }
        labels.push((v[0] as usize, C64::new(v[1], v[2])));
    }
    let cfg = PhotonConfig::new(s, dim(g))?;
    let [(n1, a1), (n2, a2), (n3, a3)] = [labels[0], labels[1], labels[2]];
    let closed = photon_kernel_closed(&cfg, n1, a1, n2, a2, n3, a3);
    let trace = photon_kernel_trace(&cfg, n1, a1, n2, a2, n3, a3)?;
    let gap = relative_gap(closed, trace);
    if gap > tol(g, 1e-3) {
        out.warn(format!("as-printed closed-form photon kernel differs from the trace oracle by relative {gap:.3e}"));
    }
    let mut t = Table::new(&[
        "n1", "alpha1_re", "alpha1_im", "n2", "alpha2_re", "alpha2_im", "n3", "alpha3_re", "alpha3_im", "re", "im",
        "trace_re", "trace_im",
    ])
    .with_meta("s", s)
    .with_meta("dim", dim(g));
    t.push(x.concat().into_iter().chain([closed.re, closed.im, trace.re, trace.im]).collect());
    emit(g, &t)?;
    Ok(out)
}

fn photon_table(alpha: C64, values: &[C64], meta: &[(&str, String)]) -> std::result::Result<Table, Error> {
    let labels = (0..values.len()).map(|n| LabelPoint::photon(n, alpha)).collect();
    let m = Measure::new(labels, vec![1.0; values.len()], format!("n < {}", values.len()))?;
    Ok(with_meta(symbol_table(&SymbolGrid::new(Arc::new(m), values.to_vec())?), meta))
}

pub fn map_optical(g: &Global, input: &Path, alpha: &str, nmax: usize) -> Result {
    let mut out = Outcome::default();
    let alpha = parse_complex(alpha)?;
    let samples = OpticalSamples::from_grid(&read_symbol_grid(input)?)?;
    let t = OpticalTransform::new(&|x, th| samples.eval(x, th), &OpticalQuadrature::default());
    let mut values = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let v = t.photon(n, alpha);
        if let Some(w) = v.warning {
            out.warn(w);
        }
        values.push(C64::new(v.value, v.imag));
    }
    let mut meta = vec![("source", input.display().to_string())];
    if samples.angle_count() == 1 {
        meta.push(("assumption", "single angle, tomogram taken as phase-invariant".into()));
    }
    emit(g, &photon_table(alpha, &values, &meta)?)?;
    Ok(out)
}

pub fn map_symplectic(g: &Global, input: &Path, alpha: &str, nmax: usize) -> Result {
    let mut out = Outcome::default();
    let alpha = parse_complex(alpha)?;
    let w = read_symbol_grid(input)?;
    let mut values = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let v = photon_from_symplectic(&w, n, alpha)?;
        if let Some(msg) = v.warning {
            out.warn(msg);
        }
        if v.imag.abs() > tol(g, 1e-3) {
            out.warn(format!("imaginary residue {:.3e} at n = {n}", v.imag));
        }
        values.push(C64::new(v.value, v.imag));
    }
    emit(g, &photon_table(alpha, &values, &[("source", input.display().to_string())])?)?;
    Ok(out)
}

fn axis_from_values(name: &str, mut v: Vec<f64>) -> std::result::Result<Axis, Error> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    let axis = Axis::new(v[0], *v.last().expect("nonempty"), v.len())?;
    let tol = 1e-9 * (axis.hi - axis.lo);
    if v.iter().enumerate().any(|(i, &x)| (x - axis.node(i)).abs() > tol) {
        return Err(Error::InvalidConfig(format!("column '{name}' is not a uniform grid")));
    }
    Ok(axis)
}

fn distribution_from_table(t: &Table) -> std::result::Result<PhaseDistribution, Error> {
    let col = |c: &str| t.column(c).ok_or_else(|| Error::InvalidConfig(format!("missing column '{c}'")));
    let (iq, ip, ire) = (col("q")?, col("p")?, col("re")?);
    if t.rows.is_empty() {
        return Err(Error::InvalidConfig("empty distribution file".into()));
    }
    let q = axis_from_values("q", t.rows.iter().map(|r| r[iq]).collect())?;
    let p = axis_from_values("p", t.rows.iter().map(|r| r[ip]).collect())?;
    let mut values = vec![f64::NAN; q.count * p.count];
    let mut seen = BTreeSet::new();
    for r in &t.rows {
        let i = ((r[iq] - q.lo) / q.spacing()).round() as usize;
        let j = ((r[ip] - p.lo) / p.spacing()).round() as usize;
        seen.insert((i, j));
        values[i * p.count + j] = r[ire];
    }
    if seen.len() != values.len() {
        return Err(Error::InvalidConfig(format!("distribution covers {} of {} grid nodes", seen.len(), values.len())));
    }
    PhaseDistribution::new(PhaseGrid::new(q, p), values)
}

pub fn classical_radon(g: &Global, input: &Path, frames: &Frames) -> Result {
    let mut out = Outcome::default();
    let dist = distribution_from_table(&Table::read_path(input)?)?;
    let (measure, single) = frames_measure(frames)?;
    let w = classical_tomogram_grid(&dist, Arc::new(measure))?;
    let mut meta = vec![("source", input.display().to_string()), ("source_normalization", dist.normalization().to_string())];
    if single {
        let norm = w.integral().re;
        check_normalization(g, norm / dist.normalization(), "relative tomogram", &mut out);
        meta.push(("normalization", norm.to_string()));
    }
    emit(g, &with_meta(symbol_table(&w), &meta))?;
    Ok(out)
}

pub fn classical_inverse(g: &Global, input: &Path, q: Axis, p: Axis) -> Result {
    let mut out = Outcome::default();
    let w = read_symbol_grid(input)?;
    let m = PhaseGrid::new(q, p).measure();
    let pts: Vec<(f64, f64)> = m
        .labels()
        .iter()
        .map(|x| match *x {
            LabelPoint::Phase { q, p } => (q, p),
            _ => unreachable!("phase grid"),
        })
        .collect();
    let vals = classical_inverse_many(&w, &pts)?;
    let mut values = Vec::with_capacity(vals.len());
    for v in vals {
        if let Some(msg) = v.warning {
            out.warn(msg);
        }
        if v.imag.abs() > tol(g, 1e-3) {
            out.warn(format!("imaginary residue {:.3e} in the reconstruction", v.imag));
        }
        values.push(C64::new(v.value, v.imag));
    }
    let grid = SymbolGrid::new(Arc::new(m), values)?;
    emit(g, &with_meta(symbol_table(&grid), &[("source", input.display().to_string())]))?;
    Ok(out)
}

pub fn quantize(g: &Global, input: &Path, s: f64) -> Result {
    let f = read_symbol_grid(input)?;
    let d = dim(g);
    let kind = f.labels().first().map(|l| l.kind()).unwrap_or("phase");
    let op = match kind {
        "phase" => WignerScheme::new(d, PhaseGrid::square(1.0, 3)?)?.quantize(&f)?,
        "symplectic" => {
            SymplecticScheme::new(d, SymplecticGrid::Optical { x: Axis::new(-1.0, 1.0, 3)?, angles: 4 })?.quantize(&f)?
        }
        _ => PhotonScheme::new(PhotonConfig::new(s, d)?, PhotonGrid { photons: 1, radial: 2, radius: 1.0, angles: 4 })?
            .quantize(&f)?,
    };
    emit(g, &with_meta(operator_table(&op), &[("source", input.display().to_string()), ("scheme", kind.into())]))?;
    Ok(Outcome::default())
}

pub fn verify(g: &Global, suite: &str, family: Option<&str>, seed: u64) -> Result {
    let suite: Suite = suite.parse()?;
    let family = family.map(str::parse::<KernelFamily>).transpose()?;
    let opts = VerifyOptions { dim: g.dim, tolerance: g.tolerance, family, seed };
    let report = run_suite(suite, &opts)?;
    let mut out = sink(g)?;
    match format(g, Format::Json) {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => {
            for f in &report.flags {
                writeln!(out, "# flag={f}")?;
            }
            writeln!(out, "# pass={}", report.pass)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["suite", "name", "kind", "value", "tolerance", "pass"])?;
            for c in &report.checks {
                let kind = format!("{:?}", c.kind).to_lowercase();
                w.write_record([
                    report.suite.as_str(),
                    &c.name,
                    &kind,
                    &starprod_core::io::fmt_f64(c.value),
                    &starprod_core::io::fmt_f64(c.tolerance),
                    if c.pass { "true" } else { "false" },
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(Outcome { warnings: Vec::new(), failed: !report.pass })
}
