use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bianchi_core::bianchi::{algebra_for, parametric_algebra, BianchiAlgebra, BianchiLabel};
use bianchi_core::curvature::{CurvatureReport, Tolerances};
use bianchi_core::evolution::{
    correspondence_table, integrate, reduce, reduce_label, EvolutionSystem, FamilyKind, Kind,
    SolutionFamily, Trajectory, TrajectoryPoint,
};
use bianchi_core::export::{
    family_trajectory, metric_samples, write_curvature_csv, write_metric_csv, write_plot_csv,
};
use bianchi_core::geometry::chart;
use bianchi_core::json;
use bianchi_core::verify::{
    compatible_family, run_verification, sample_grid, sample_state, Verdict, VerificationSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bianchi", version, about = "Hyper-Kähler and hyper-symplectic metrics of Bianchi type A")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bianchi groups with their reduced sign patterns and HK/HS partners.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
    },
    /// Run every pointwise check on a solution family and write a JSON report.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write trajectories, curvature series or coordinate metrics.
    Export {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "trajectory")]
        what: What,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Trajectory source: exact evaluation or RK4 from the initial sample.
        #[arg(long, value_enum, default_value = "closed-form")]
        source: Source,
        /// RK4 step for `--source integrate`.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Group coordinates for `--what metric`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0, 0.0, 0.0])]
        coords: Vec<f64>,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Trajectory,
    Curvature,
    Plot,
    Metric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    ClosedForm,
    Integrate,
}

#[derive(Args)]
struct FamilyArgs {
    /// Bianchi label: I, II, VI0, VII0, VIII, IX (class B labels are rejected).
    #[arg(long)]
    group: String,
    /// Parameter of the VIIa and VIa groups.
    #[arg(long)]
    group_a: Option<f64>,
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long)]
    a3: Option<f64>,
    #[arg(long = "a", allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long = "b", allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long = "c", allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long = "A", allow_negative_numbers = true)]
    big_a: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    big_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Relative perturbation of f1 (a deliberate non-solution).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    perturb: f64,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    tol_df: Option<f64>,
    #[arg(long)]
    tol_ricci: Option<f64>,
    #[arg(long)]
    tol_weyl_sd: Option<f64>,
    #[arg(long)]
    tol_nijenhuis: Option<f64>,
    #[arg(long)]
    tol_identities: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            residual: self.tol_residual.unwrap_or(d.residual),
            d_f: self.tol_df.unwrap_or(d.d_f),
            ricci: self.tol_ricci.unwrap_or(d.ricci),
            weyl_sd: self.tol_weyl_sd.unwrap_or(d.weyl_sd),
            nijenhuis: self.tol_nijenhuis.unwrap_or(d.nijenhuis),
            identities: self.tol_identities.unwrap_or(d.identities),
        }
    }
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse()
}

/// Failures that map to exit code 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

impl FamilyArgs {
    fn algebra(&self) -> Result<BianchiAlgebra, CliError> {
        let label: BianchiLabel = self.group.parse().map_err(usage)?;
        match (label.is_parametric(), self.group_a) {
            (true, Some(a)) => parametric_algebra(label, a).map_err(usage),
            // VIIa and VIa are class B for every admissible a, so reject before asking for it
            (true, None) => Err(usage(class_b_reason(label))),
            _ => algebra_for(label).map_err(usage),
        }
    }

    fn params(&self) -> Result<[f64; 3], CliError> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("family {} needs --{flag}", self.family)))
        };
        use FamilyKind::*;
        Ok(match self.family {
            GeneralPpp | GeneralPpm | General0pp | General0pm => [
                need(self.a1, "a1")?,
                need(self.a2, "a2")?,
                need(self.a3, "a3")?,
            ],
            General00p | BgppTriaxial => [need(self.a, "a")?, need(self.b, "b")?, need(self.c, "c")?],
            EguchiHanson | Su11Biaxial => [need(self.a, "a")?, 0.0, 0.0],
            Vii0Vacuum => [need(self.big_a, "A")?, need(self.big_b, "B")?, 0.0],
            Vi0Vacuum => [need(self.a, "a")?, need(self.b, "b")?, 0.0],
            HeisenbergGh | Flat => [0.0; 3],
        })
    }

    fn spec(&self) -> Result<VerificationSpec, CliError> {
        Ok(VerificationSpec {
            group: self.algebra()?,
            kind: self.kind,
            family: self.family,
            params: self.params()?,
            t_min: self.t_min,
            t_max: self.t_max,
            samples: self.samples,
            perturb: self.perturb,
        })
    }

    /// The family bound to the group's system, after checking class A.
    fn bind(&self) -> Result<(VerificationSpec, EvolutionSystem, SolutionFamily), CliError> {
        let spec = self.spec()?;
        if spec.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        if !(spec.t_min <= spec.t_max) {
            return Err(CliError::Usage("--t-min must not exceed --t-max".into()));
        }
        let (sys, fam) =
            compatible_family(&spec.group, spec.kind, spec.family, spec.params).map_err(usage)?;
        Ok((spec, sys, fam))
    }
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => File::create(path)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|source| CliError::Output {
                path: path.display().to_string(),
                source,
            }),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn write_err(out: &Option<PathBuf>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Output {
        path: out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "standard output".into()),
        source,
    }
}

/// Why a label cannot carry the construction, if it cannot.
fn class_b_reason(label: BianchiLabel) -> String {
    let alg = parametric_algebra(label, 2.0).expect("a = 2 is admissible for every family");
    match reduce(&alg, Kind::Hk) {
        Ok(_) => String::new(),
        Err(e) => e.to_string(),
    }
}

fn fmt_sigma(s: [i8; 3]) -> String {
    format!("({},{},{})", s[0], s[1], s[2])
}

#[derive(Serialize)]
struct ListRow {
    group: BianchiLabel,
    class: &'static str,
    sigma_hk: Option<[i8; 3]>,
    sigma_hs: Option<[i8; 3]>,
    hs_partner: Option<String>,
    note: String,
}

fn list_rows() -> Vec<ListRow> {
    let table = correspondence_table();
    BianchiLabel::ALL
        .into_iter()
        .map(|label| match reduce_label(label, Kind::Hk) {
            Err(_) if label.is_parametric() => ListRow {
                group: label,
                class: "B",
                sigma_hk: None,
                sigma_hs: None,
                hs_partner: None,
                note: format!("rejected: {}", class_b_reason(label)),
            },
            Ok(hk) => {
                let hs = reduce_label(label, Kind::Hs).expect("class A reduces for both kinds");
                let partner = table.iter().find(|p| p.hk == label).map(|p| {
                    if p.sign_flipped {
                        format!("{} (up to sign)", p.hs)
                    } else {
                        p.hs.to_string()
                    }
                });
                let note = if partner.is_none() {
                    "abelian: all f_i f_j constant".to_string()
                } else {
                    String::new()
                };
                ListRow {
                    group: label,
                    class: "A",
                    sigma_hk: Some(hk.sigma),
                    sigma_hs: Some(hs.sigma),
                    hs_partner: partner,
                    note,
                }
            }
            Err(e) => ListRow {
                group: label,
                class: "B",
                sigma_hk: None,
                sigma_hs: None,
                hs_partner: None,
                note: format!("rejected: {e}"),
            },
        })
        .collect()
}

fn cmd_list(format: ListFormat) -> Result<(), CliError> {
    let rows = list_rows();
    let mut out = io::stdout().lock();
    let werr = write_err(&None);
    match format {
        ListFormat::Json => {
            json::to_writer(&mut out, &rows).map_err(usage)?;
            writeln!(out).map_err(&werr)?;
        }
        ListFormat::Text => {
            writeln!(out, "{:<6} {:<5} {:<10} {:<10} {:<18} note", "group", "class", "sigma_HK", "sigma_HS", "HK system = HS of")
                .map_err(&werr)?;
            for r in rows {
                let s = |v: Option<[i8; 3]>| v.map(fmt_sigma).unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{:<6} {:<5} {:<10} {:<10} {:<18} {}",
                    r.group.as_str(),
                    r.class,
                    s(r.sigma_hk),
                    s(r.sigma_hs),
                    r.hs_partner.as_deref().unwrap_or("-"),
                    r.note
                )
                .map_err(&werr)?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(family: &FamilyArgs, tol: &TolArgs, out: &Option<PathBuf>) -> Result<Verdict, CliError> {
    let spec = family.spec()?;
    let run = run_verification(&spec, &tol.resolve()).map_err(usage)?;
    let mut w = open_out(out)?;
    json::to_writer(&mut w, &run).map_err(usage)?;
    writeln!(w).map_err(write_err(out))?;
    w.flush().map_err(write_err(out))?;
    let failing = run.results.iter().filter(|r| !r.pass.all).count();
    eprintln!(
        "verdict: {} ({} samples, {failing} failing)",
        match run.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        },
        run.results.len()
    );
    Ok(run.verdict)
}

fn integrated_trajectory(
    sys: &EvolutionSystem,
    fam: &SolutionFamily,
    ts: &[f64],
    step: f64,
) -> Result<Trajectory, CliError> {
    let gauge = |t: f64| fam.eval(t).map(|p| p.gauge.v).unwrap_or(f64::NAN);
    let first = fam.eval(ts[0]).map_err(usage)?;
    let (f0, g0) = first.values();
    let mut points = vec![TrajectoryPoint { t: ts[0], f: f0, gauge: g0 }];
    for w in ts.windows(2) {
        let last = *points.last().expect("nonempty");
        let seg = integrate(sys, gauge, last.f, w[0], w[1], step).map_err(usage)?;
        if let Some(hit) = seg.boundary {
            return Ok(Trajectory { points, boundary: Some(hit) });
        }
        points.push(*seg.last());
    }
    Ok(Trajectory { points, boundary: None })
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    family: &FamilyArgs,
    what: What,
    format: Format,
    source: Source,
    step: f64,
    coords: &[f64],
    tol: &TolArgs,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let (spec, sys, fam) = family.bind()?;
    if coords.len() != 3 {
        return Err(CliError::Usage(format!("--coords takes 3 values, got {}", coords.len())));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let ts = sample_grid(spec.t_min, spec.t_max, spec.samples);
    // evaluate everything before touching the output path
    enum Payload {
        Trajectory(Trajectory),
        Reports(Vec<CurvatureReport>),
        Metric(Vec<bianchi_core::export::MetricSample>),
    }
    let payload = match what {
        What::Trajectory => Payload::Trajectory(match source {
            Source::ClosedForm => family_trajectory(&fam, &ts).map_err(usage)?,
            Source::Integrate => integrated_trajectory(&sys, &fam, &ts, step)?,
        }),
        What::Curvature | What::Plot => {
            let tol = tol.resolve();
            let reports = ts
                .iter()
                .map(|&t| {
                    let st = sample_state(&fam, &spec.group, spec.kind, t, spec.perturb).map_err(usage)?;
                    CurvatureReport::assess(&st, sys.sigma.map(f64::from), &tol).map_err(usage)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Payload::Reports(reports)
        }
        What::Metric => {
            let ch = chart(spec.group.label).map_err(usage)?;
            let c = [coords[0], coords[1], coords[2]];
            Payload::Metric(metric_samples(&fam, &spec.group, spec.kind, &ch, &ts, c).map_err(usage)?)
        }
    };
    let mut w = open_out(out)?;
    let werr = write_err(out);
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    match (payload, format) {
        (Payload::Trajectory(tr), Format::Csv) => tr.write_csv(&mut w).map_err(csv_err)?,
        (Payload::Trajectory(tr), Format::Json) => json::to_writer(&mut w, &tr).map_err(usage)?,
        (Payload::Reports(r), Format::Csv) => match what {
            What::Plot => write_plot_csv(&r, &mut w).map_err(csv_err)?,
            _ => write_curvature_csv(&r, &mut w).map_err(csv_err)?,
        },
        (Payload::Reports(r), Format::Json) => match what {
            What::Plot => {
                #[derive(Serialize)]
                struct PlotRow {
                    t: f64,
                    ricci_max_abs: f64,
                    weyl_sd_norm: f64,
                    riemann_norm: f64,
                }
                let rows: Vec<PlotRow> = r
                    .iter()
                    .map(|x| PlotRow {
                        t: x.t,
                        ricci_max_abs: x.ricci_max_abs,
                        weyl_sd_norm: x.weyl_sd_norm,
                        riemann_norm: x.riemann_norm,
                    })
                    .collect();
                json::to_writer(&mut w, &rows).map_err(usage)?
            }
            _ => json::to_writer(&mut w, &r).map_err(usage)?,
        },
        (Payload::Metric(m), Format::Csv) => write_metric_csv(&m, &mut w).map_err(csv_err)?,
        (Payload::Metric(m), Format::Json) => json::to_writer(&mut w, &m).map_err(usage)?,
    }
    if format == Format::Json {
        writeln!(w).map_err(&werr)?;
    }
    w.flush().map_err(&werr)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::List { format } => cmd_list(*format).map(|_| ExitCode::SUCCESS),
        Command::Verify { family, tol, out } => cmd_verify(family, tol, out).map(|v| match v {
            Verdict::Pass => ExitCode::SUCCESS,
            Verdict::Fail => ExitCode::from(1),
        }),
        Command::Export {
            family,
            what,
            format,
            source,
            step,
            coords,
            tol,
            out,
        } => cmd_export(family, *what, *format, *source, *step, coords, tol, out)
            .map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
