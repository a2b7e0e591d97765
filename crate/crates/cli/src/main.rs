//! `qcompound` command-line front end.
//!
//! Exit codes: 0 when every checked law holds, 1 when a violation was
//! found, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcompound::cascade::{born_probability, chain_order_check, run_cascade_ordered, CascadeTrace, Order};
use qcompound::compound::{atomicity_probe, from_tensor, schmidt, Linearity};
use qcompound::galois::{classify_map, enumerate_q, galois_dual};
use qcompound::hilbert::{Subspace, DEFAULT_TOL};
use qcompound::io::{self, Format, IoError, MatrixJson, TensorJson};
use qcompound::quantale::{enumerate_members, epimorphism_check, quantale_laws};
use qcompound::suite::{self, VerificationReport};
use qcompound::{random, FiniteLattice};

#[derive(Parser)]
#[command(name = "qcompound", version, about = "Property lattices, states of compoundness and measurement cascades")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Numerical tolerance for subspace and probability comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of random trials.
    #[arg(long, global = true, default_value_t = 500)]
    trials: usize,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing; report through the exit code only.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Finite lattices and ortholattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Join maps and their Galois duals.
    #[command(subcommand)]
    Galois(GaloisCmd),
    /// Subspace lattice operations in C^n.
    Hilbert(HilbertCmd),
    /// (Anti)linear operators as states of compoundness.
    #[command(subcommand)]
    Compound(CompoundCmd),
    /// Measurement cascades.
    #[command(subcommand)]
    Cascade(CascadeCmd),
    /// Transition quantales of finite state spaces.
    #[command(subcommand)]
    Quantale(QuantaleCmd),
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Convert between file formats.
    Convert {
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Validate a lattice file and summarise it.
    Check { file: PathBuf },
    /// Sasaki projection of `b` onto `a` (labels or indices).
    Sasaki { file: PathBuf, a: String, b: String },
}

#[derive(Subcommand)]
enum GaloisCmd {
    /// The Galois dual of a join map.
    Dual { map: PathBuf },
    /// All join maps between two lattices.
    Enumerate { source: PathBuf, target: PathBuf },
    /// Evolution type of a join map.
    Classify { map: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum HilbertOp {
    Meet,
    Join,
    Ortho,
    Sasaki,
}

#[derive(Args)]
struct HilbertCmd {
    #[arg(value_enum)]
    op: HilbertOp,
    a: PathBuf,
    b: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CompoundCmd {
    /// The quadruple (F, ρ1, ρ2, F†).
    Quadruple { operator: PathBuf },
    /// Schmidt form of the tensor-product vector of an operator.
    Tensor { operator: PathBuf },
    /// Sample the induced maps of F ≤ G on random rays.
    Probe {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    LeftFirst,
    RightFirst,
}

#[derive(Subcommand)]
enum CascadeCmd {
    /// Run one cascade for the outcome ψ ⊗ φ.
    Run {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::LeftFirst)]
        order: OrderArg,
    },
    /// Randomised cascade campaign at a fixed dimension.
    Verify {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[derive(Subcommand)]
enum QuantaleCmd {
    /// Exhaustive quantale laws over all members.
    Check { space: PathBuf },
    /// Epimorphism onto property propagations, on all pairs of members.
    Epi { space: PathBuf },
}

/// Outcome of a command: text for humans, JSON for machines.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let global = cli.global.clone();
    match run(cli) {
        Ok(out) => {
            if !global.quiet {
                if global.json {
                    println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize"));
                } else {
                    println!("{}", out.text.trim_end());
                }
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if !global.quiet {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Lattice(cmd) => lattice(cmd),
        Command::Galois(cmd) => galois(cmd),
        Command::Hilbert(cmd) => hilbert(cmd, g),
        Command::Compound(cmd) => compound(cmd, g),
        Command::Cascade(cmd) => cascade(cmd, g),
        Command::Quantale(cmd) => quantale(cmd),
        Command::Verify { suite } => verify(&suite, g),
        Command::Convert { input, from, to } => {
            let (from, to): (Format, Format) = (from.parse()?, to.parse()?);
            let text = io::convert(&input, from, to)?;
            let json = serde_json::from_str(&text)?;
            Ok(Outcome::ok(text, json))
        }
    }
}

fn set_labels(l: &FiniteLattice, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| l.label(x).to_owned()).collect()
}

fn lattice(cmd: LatticeCmd) -> anyhow::Result<Outcome> {
    match cmd {
        LatticeCmd::Check { file } => {
            let json: io::LatticeJson = io::parse_str(&read(&file)?)?;
            let loaded = match json.to_lattice() {
                Ok(l) => l,
                Err(IoError::Invalid { message, .. }) => {
                    return Ok(Outcome {
                        text: format!("invalid: {message}"),
                        json: json!({ "valid": false, "error": message }),
                        ok: false,
                    })
                }
                Err(e) => return Err(e.into()),
            };
            let l = &loaded.lattice;
            let atoms = set_labels(l, &l.atoms());
            let irreducibles = set_labels(l, &l.join_irreducibles());
            let mut text = format!(
                "valid lattice with {} elements\nbottom: {}\ntop: {}\natoms: {}\njoin-irreducibles: {}\ndistributive: {}\n",
                l.len(),
                l.label(l.bottom()),
                l.label(l.top()),
                atoms.join(", "),
                irreducibles.join(", "),
                l.is_distributive()
            );
            if loaded.ortho.is_some() {
                text.push_str("orthocomplement: valid, orthomodular\n");
            }
            Ok(Outcome::ok(
                text,
                json!({
                    "valid": true,
                    "size": l.len(),
                    "bottom": l.bottom(),
                    "top": l.top(),
                    "atoms": atoms,
                    "join_irreducibles": irreducibles,
                    "distributive": l.is_distributive(),
                    "orthomodular": loaded.ortho.is_some(),
                }),
            ))
        }
        LatticeCmd::Sasaki { file, a, b } => {
            let loaded = io::load_lattice(&file)?;
            let ol = loaded.ortho.ok_or_else(|| anyhow!("{} has no `ortho` table", file.display()))?;
            let l = ol.lattice();
            let (a, b) = (l.resolve(&a)?, l.resolve(&b)?);
            let s = ol.sasaki(a, b);
            Ok(Outcome::ok(
                format!("phi_{}({}) = {}", l.label(a), l.label(b), l.label(s)),
                json!({ "a": a, "b": b, "result": s, "label": l.label(s), "compatible": ol.compatible(a, b) }),
            ))
        }
    }
}

fn galois(cmd: GaloisCmd) -> anyhow::Result<Outcome> {
    match cmd {
        GaloisCmd::Dual { map } => {
            let f = io::load_map(&map)?;
            let dual = galois_dual(&f);
            let labels = set_labels(f.source(), dual.table());
            let text = f
                .target()
                .elements()
                .map(|b| format!("f*({}) = {}", f.target().label(b), labels[b]))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok(text, json!({ "table": dual.table(), "labels": labels })))
        }
        GaloisCmd::Enumerate { source, target } => {
            let l1 = io::load_lattice(&source)?.lattice;
            let l2 = io::load_lattice(&target)?.lattice;
            let q = enumerate_q(&l1, &l2)?;
            let tables: Vec<&[usize]> = q.maps().iter().map(|f| f.table()).collect();
            let mut text = format!("{} join-preserving maps\n", q.len());
            for t in &tables {
                text.push_str(&format!("{t:?}\n"));
            }
            text.push_str(&format!("top: {:?}\nbottom: {:?}\n", q.top().table(), q.bottom().table()));
            Ok(Outcome::ok(
                text,
                json!({ "count": q.len(), "maps": tables, "top": q.top().table(), "bottom": q.bottom().table() }),
            ))
        }
        GaloisCmd::Classify { map } => {
            let f = io::load_map(&map)?;
            let c = classify_map(&f);
            Ok(Outcome::ok(
                c.label().to_owned(),
                json!({ "label": c.label(), "atomistic": c.atomistic, "separation_like": c.separation_like }),
            ))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_subspace(path: &Path, tol: f64) -> anyhow::Result<Subspace> {
    Ok(Subspace::span(&io::load_matrix(path)?, tol)?)
}

fn subspace_outcome(name: &str, s: &Subspace, extra: Value) -> Outcome {
    let frame = MatrixJson::from_matrix(s.frame());
    let text = format!("{name}: rank {} in C^{}\n{}", s.rank(), s.ambient_dim(), io::to_json(&frame));
    let mut json = json!({ "rank": s.rank(), "dim": s.ambient_dim(), "frame": frame });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Outcome::ok(text, json)
}

fn hilbert(cmd: HilbertCmd, g: &Global) -> anyhow::Result<Outcome> {
    let a = load_subspace(&cmd.a, g.tol)?;
    let b = match (&cmd.b, cmd.op) {
        (None, HilbertOp::Ortho) => None,
        (Some(path), _) => Some(load_subspace(path, g.tol)?),
        (None, _) => bail!("this operation needs two subspace files"),
    };
    Ok(match (cmd.op, b) {
        (HilbertOp::Ortho, _) => subspace_outcome("ortho", &a.ortho(), json!({})),
        (HilbertOp::Meet, Some(b)) => subspace_outcome("meet", &a.meet(&b)?, json!({})),
        (HilbertOp::Join, Some(b)) => subspace_outcome("join", &a.join(&b)?, json!({})),
        (HilbertOp::Sasaki, Some(b)) => {
            let (s, d) = a.sasaki_with_discrepancy(&b)?;
            let mut out = subspace_outcome("sasaki", &s, json!({ "cross_check_discrepancy": d }));
            out.ok = d <= g.tol;
            out.text.push_str(&format!("\ncross-check discrepancy: {d:e}"));
            out
        }
        _ => unreachable!("second operand checked above"),
    })
}

fn compound(cmd: CompoundCmd, g: &Global) -> anyhow::Result<Outcome> {
    match cmd {
        CompoundCmd::Quadruple { operator } => {
            let f = io::load_operator(&operator)?;
            let q = f.quadruple()?;
            let json = json!({
                "forward": MatrixJson::from_operator(&q.forward),
                "rho1": MatrixJson::from_matrix(q.rho1.matrix()),
                "rho2": MatrixJson::from_matrix(q.rho2.matrix()),
                "backward": MatrixJson::from_operator(&q.backward),
            });
            let text = format!(
                "rho1 ({}x{}), trace {:.12}, min eigenvalue {:.3e}\nrho2 ({}x{}), trace {:.12}, min eigenvalue {:.3e}\n{}",
                q.rho1.dim(),
                q.rho1.dim(),
                q.rho1.trace(),
                q.rho1.min_eigenvalue(),
                q.rho2.dim(),
                q.rho2.dim(),
                q.rho2.trace(),
                q.rho2.min_eigenvalue(),
                serde_json::to_string_pretty(&json)?
            );
            Ok(Outcome::ok(text, json))
        }
        CompoundCmd::Tensor { operator } => {
            let f = io::load_operator(&operator)?;
            let tv = schmidt(&f);
            let json = serde_json::to_value(TensorJson::from_tensor_vector(&tv))?;
            let coeffs: Vec<String> = tv.coefficients().iter().map(|z| format!("{:.12}", z.re)).collect();
            let text = format!(
                "Schmidt rank {}\ncoefficients: {}\nHilbert-Schmidt norm: {:.12}\n{}",
                tv.terms(),
                coeffs.join(", "),
                f.hs_norm(),
                serde_json::to_string_pretty(&json)?
            );
            Ok(Outcome::ok(text, json))
        }
        CompoundCmd::Probe { f, g: gpath, samples } => {
            let f = io::load_operator(&f)?;
            let gop = io::load_operator(&gpath)?;
            let mut rng = random::seeded(g.seed);
            let report = atomicity_probe(&f, &gop, samples, &mut rng)?;
            let text = format!(
                "samples: {}\norder f <= g: {}\nf = 0: {}\nf = g on samples: {}\nconsistent: {}",
                report.samples, report.order_holds, report.f_is_zero, report.equal_on_samples, report.consistent_with_prop1
            );
            Ok(Outcome { text, ok: report.consistent_with_prop1, json: serde_json::to_value(&report)? })
        }
    }
}

fn trace_json(trace: &CascadeTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "side": s.side.number(),
                "kind": s.kind,
                "probability": s.probability,
                "carrier_rank_before": s.carrier_pre.rank(),
                "carrier_rank_after": s.carrier_post.rank(),
                "measured_property": MatrixJson::from_matrix(s.measured_property.frame()),
            })
        })
        .collect();
    json!({ "steps": steps, "joint_probability": trace.joint_probability })
}

fn cascade(cmd: CascadeCmd, g: &Global) -> anyhow::Result<Outcome> {
    match cmd {
        CascadeCmd::Run { state, left, right, order } => {
            let tv = io::load_tensor(&state)?;
            let psi = io::load_vector(&left)?;
            let phi = io::load_vector(&right)?;
            let f = from_tensor(&tv, Linearity::Antilinear);
            let order = match order {
                OrderArg::LeftFirst => Order::LeftFirst,
                OrderArg::RightFirst => Order::RightFirst,
            };
            let trace = run_cascade_ordered(&f, &Subspace::ray(&psi), &Subspace::ray(&phi), order)?;
            let born = born_probability(&tv, &psi, &phi)?;
            let diff = (trace.joint_probability - born).abs();
            let chain = chain_order_check(&trace);
            let mut text = String::from("step  side  kind         probability\n");
            for (i, s) in trace.steps.iter().enumerate() {
                let kind = format!("{:?}", s.kind).to_lowercase();
                text.push_str(&format!("{:<5} {:<5} {:<12} {:.12}\n", i + 1, s.side.number(), kind, s.probability));
            }
            text.push_str(&format!(
                "joint probability: {:.12}\nBorn probability:  {born:.12}\ndifference: {diff:.3e}\ndescending chain: {chain}",
                trace.joint_probability
            ));
            let mut json = trace_json(&trace);
            json["born_probability"] = json!(born);
            json["descending_chain"] = json!(chain);
            Ok(Outcome { text, json, ok: diff <= g.tol && chain })
        }
        CascadeCmd::Verify { dim } => {
            let report = suite::verify_cascade(dim, g.seed, g.trials, g.tol)?;
            Ok(report_outcome(vec![report]))
        }
    }
}

fn quantale(cmd: QuantaleCmd) -> anyhow::Result<Outcome> {
    let (path, epi) = match cmd {
        QuantaleCmd::Check { space } => (space, false),
        QuantaleCmd::Epi { space } => (space, true),
    };
    let space = Arc::new(io::load_space(&path)?);
    let members = enumerate_members(&space)?;
    if epi {
        let r = epimorphism_check(&space, &members)?;
        let text = format!("{} members, {} pairs checked, {} failures", members.len(), r.pairs_checked, r.failures.len());
        return Ok(Outcome { text, ok: r.passed(), json: serde_json::to_value(&r)? });
    }
    let r = quantale_laws(&space, &members)?;
    let text = format!(
        "members: {}\nclosed under composition and union: {}\nassociative: {}\nleft distributive: {}\nright distributive: {}\nempty map is the unit of union: {}",
        r.members, r.closed, r.associative, r.left_distributive, r.right_distributive, r.bottom_is_unit_of_union
    );
    Ok(Outcome { text, ok: r.passed(), json: serde_json::to_value(&r)? })
}

fn report_outcome(reports: Vec<VerificationReport>) -> Outcome {
    let mut text = format!("{:<14} {:>7} {:>9} {:>15} {:>9}\n", "suite", "trials", "failures", "max discrepancy", "ms");
    for r in &reports {
        text.push_str(&format!(
            "{:<14} {:>7} {:>9} {:>15.3e} {:>9}\n",
            r.suite,
            r.trials,
            r.failures.len(),
            r.max_discrepancy,
            r.elapsed_ms
        ));
        for f in r.failures.iter().take(3) {
            text.push_str(&format!("  {} violated, discrepancy {:e}\n", f.law, f.discrepancy));
        }
    }
    let ok = reports.iter().all(VerificationReport::passed);
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    };
    Outcome { text, json: json.expect("reports serialize"), ok }
}

fn verify(name: &str, g: &Global) -> anyhow::Result<Outcome> {
    let names: Vec<&str> = if name == "all" { suite::SUITES.to_vec() } else { vec![name] };
    let reports = names
        .into_iter()
        .map(|n| suite::run_suite_with_tol(n, g.seed, g.trials, g.tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report_outcome(reports))
}
