//! `qhydrogen` — level tables, doublet splittings, deformation fits and
//! algebra checks for the q-deformed hydrogen atom.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (bad q, impossible
//! fit target, ...), 4 a verification check exceeded its tolerance.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{csv_table, fmt_num, json_envelope, text_table, Format};
use qhydrogen::operators::{
    su11_generators, su11_generators_from_action, su2_generators, su2_generators_from_action,
};
use qhydrogen::{
    casimir_block_spectrum, check_qboson_relations, check_su11_relations, check_su2_relations,
    constants_table, convert, fit_q, ks_shell_levels, max_abs_difference, pauli_spectrum,
    so32_closure_residual, splitting, AtomConfig, EnergyUnit, QParam, ReducedMass, Result,
    SpectrumRow, SpectrumTable, TruncatedBasis, CONSTANTS_VERSION, DEFAULT_FIT_TOL,
    DEFAULT_GROUPING_TOL,
};

#[derive(Parser)]
#[command(
    name = "qhydrogen",
    version,
    about = "q-deformed hydrogen atom: deformed spectra, level splittings and algebra checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the discrete levels of a deformed model
    Levels(LevelsArgs),
    /// Exact and small-deformation splitting of the first excited shell
    Split(SplitArgs),
    /// Fit the deformation q to a measured splitting magnitude
    Fit(FitArgs),
    /// Check the operator algebra numerically on a truncated basis
    Verify(VerifyArgs),
    /// Print the physical constants built into the unit conversions
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Rotational-invariance-preserving deformation of the j-shell spectrum
    Pauli,
    /// Four-oscillator realization with shells grouped by nu
    Ks,
}

impl Model {
    fn token(&self) -> &'static str {
        match self {
            Model::Pauli => "pauli",
            Model::Ks => "ks",
        }
    }
}

fn parse_unit(token: &str) -> std::result::Result<EnergyUnit, String> {
    EnergyUnit::parse(token).map_err(|e| e.to_string())
}

fn parse_mass(token: &str) -> std::result::Result<ReducedMass, String> {
    ReducedMass::parse(token).map_err(|e| e.to_string())
}

#[derive(Args)]
struct AtomArgs {
    /// Nuclear charge Z
    #[arg(long, default_value_t = 1)]
    z: u32,
    /// Nuclear mass: h, d, inf or ratio:<mu/m_e>
    #[arg(long, default_value = "h", value_parser = parse_mass)]
    mass: ReducedMass,
}

impl AtomArgs {
    fn config(&self) -> Result<AtomConfig> {
        AtomConfig::new(self.z, self.mass)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the rendered output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LevelsArgs {
    /// Which deformed spectrum to print
    #[arg(long, value_enum)]
    model: Model,
    /// Deformation parameter q > 0
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    q: f64,
    /// Highest principal shell n to include
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    max_shell: u32,
    /// Energy unit
    #[arg(long, default_value = "e0", value_parser = parse_unit)]
    unit: EnergyUnit,
    #[command(flatten)]
    atom: AtomArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SplitArgs {
    /// Deformation parameter q > 0
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    /// Energy unit
    #[arg(long, default_value = "e0", value_parser = parse_unit)]
    unit: EnergyUnit,
    #[command(flatten)]
    atom: AtomArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FitArgs {
    /// Splitting magnitude to reproduce, in --unit
    #[arg(long, allow_negative_numbers = true)]
    target: f64,
    /// Unit the target is given in
    #[arg(long, default_value = "e0", value_parser = parse_unit)]
    unit: EnergyUnit,
    /// Residual tolerance in the target's unit
    #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
    tol: f64,
    #[command(flatten)]
    atom: AtomArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Deformation parameter q > 0
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    q: f64,
    /// Oscillator truncation per mode
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    n_max: u32,
    /// Largest acceptable residual for the asserted checks
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConstantsArgs {
    #[command(flatten)]
    output: OutputArgs,
}

/// Rendered text plus whether an asserted verification check failed.
struct Rendered {
    text: String,
    verification_failed: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered {
            text,
            verification_failed: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (rendered, output_args) = match &cli.command {
        Command::Levels(args) => (run_levels(args), &args.output),
        Command::Split(args) => (run_split(args), &args.output),
        Command::Fit(args) => (run_fit(args), &args.output),
        Command::Verify(args) => (run_verify(args), &args.output),
        Command::Constants(args) => (run_constants(args), &args.output),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Some(path) = &output_args.out {
        if let Err(e) = std::fs::write(path, &rendered.text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    } else {
        print!("{}", rendered.text);
    }
    if rendered.verification_failed {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    }
}

fn pattern_text(pattern: &[u32; 4]) -> String {
    format!(
        "({},{},{},{})",
        pattern[0], pattern[1], pattern[2], pattern[3]
    )
}

fn level_rows(args: &LevelsArgs, q: &QParam, config: &AtomConfig) -> Result<Vec<SpectrumRow>> {
    let mut rows = Vec::new();
    match args.model {
        Model::Pauli => {
            // Shell n holds the level with 2j = n - 1.
            for level in pauli_spectrum(args.max_shell - 1, q)? {
                rows.push(SpectrumRow {
                    label: format!("2j={}", level.two_j),
                    energy: convert(
                        level.energy_ratio,
                        EnergyUnit::RatioOfGround,
                        args.unit,
                        config,
                    )?,
                    multiplicity: level.degeneracy,
                    two_j: Some(level.two_j),
                    shell: None,
                    nu: None,
                    physical_multiplicity: None,
                    members: None,
                });
            }
        }
        Model::Ks => {
            for n in 1..=args.max_shell {
                for level in ks_shell_levels(n, q, DEFAULT_GROUPING_TOL)? {
                    let types: Vec<String> = level.patterns().iter().map(pattern_text).collect();
                    rows.push(SpectrumRow {
                        label: format!("n={} type={}", n, types.join("+")),
                        energy: convert(
                            level.energy_ratio,
                            EnergyUnit::RatioOfGround,
                            args.unit,
                            config,
                        )?,
                        multiplicity: level.oscillator_multiplicity,
                        two_j: None,
                        shell: Some(n),
                        nu: Some(level.nu),
                        physical_multiplicity: level.physical_multiplicity,
                        members: Some(level.members.clone()),
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn run_levels(args: &LevelsArgs) -> Result<Rendered> {
    let q = QParam::real(args.q)?;
    let config = args.atom.config()?;
    let table = SpectrumTable {
        model: args.model.token().to_string(),
        q: args.q,
        unit: args.unit.token().to_string(),
        z: args.atom.z,
        mass: args.atom.mass.token(),
        levels: level_rows(args, &q, &config)?,
    };
    let params = json!({
        "model": args.model.token(),
        "q": args.q,
        "max_shell": args.max_shell,
        "unit": args.unit.token(),
        "z": args.atom.z,
        "mass": args.atom.mass.token(),
    });
    let text = match args.output.format {
        Format::Json => json_envelope(
            "levels",
            params,
            serde_json::to_value(&table).expect("serializable table"),
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = table
                .levels
                .iter()
                .map(|row| {
                    vec![
                        row.label.clone(),
                        fmt_num(row.energy),
                        row.multiplicity.to_string(),
                        row.physical_multiplicity
                            .map_or_else(|| "-".to_string(), |m| m.to_string()),
                    ]
                })
                .collect();
            let energy_head = format!("energy [{}]", args.unit.label());
            let mut text = format!(
                "levels  model={}  q={}  Z={}  mass={}\n\n",
                table.model,
                fmt_num(table.q),
                table.z,
                table.mass
            );
            text.push_str(&text_table(
                &["label", &energy_head, "multiplicity", "physical"],
                &rows,
            ));
            text
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .levels
                .iter()
                .map(|row| {
                    vec![
                        table.model.clone(),
                        row.label.clone(),
                        fmt_num(row.energy),
                        table.unit.clone(),
                        row.multiplicity.to_string(),
                        fmt_num(table.q),
                    ]
                })
                .collect();
            csv_table(
                &["model", "label", "energy", "unit", "multiplicity", "q"],
                &rows,
            )
        }
    };
    Ok(Rendered::ok(text))
}

fn run_split(args: &SplitArgs) -> Result<Rendered> {
    let q = QParam::real(args.q)?;
    let config = args.atom.config()?;
    let result = splitting(&q, &config, args.unit)?;
    let params = json!({
        "q": args.q,
        "unit": args.unit.token(),
        "z": args.atom.z,
        "mass": args.atom.mass.token(),
    });
    let text = match args.output.format {
        Format::Json => json_envelope(
            "split",
            params,
            serde_json::to_value(&result).expect("serializable splitting"),
        ),
        Format::Table => {
            let rows = vec![
                vec!["delta_exact".to_string(), fmt_num(result.delta_exact)],
                vec![
                    "delta_quadratic".to_string(),
                    fmt_num(result.delta_quadratic),
                ],
            ];
            let value_head = format!("value [{}]", args.unit.label());
            let mut text = format!(
                "first-excited-shell splitting  q={}  Z={}  mass={}\n\n",
                fmt_num(args.q),
                args.atom.z,
                args.atom.mass.token()
            );
            text.push_str(&text_table(&["quantity", &value_head], &rows));
            text
        }
        Format::Csv => csv_table(
            &["q", "delta_exact", "delta_quadratic", "unit"],
            &[vec![
                fmt_num(result.q),
                fmt_num(result.delta_exact),
                fmt_num(result.delta_quadratic),
                args.unit.token().to_string(),
            ]],
        ),
    };
    Ok(Rendered::ok(text))
}

fn run_fit(args: &FitArgs) -> Result<Rendered> {
    let config = args.atom.config()?;
    let fit = fit_q(args.target, args.unit, &config, args.tol)?;
    let params = json!({
        "target": args.target,
        "unit": args.unit.token(),
        "tol": args.tol,
        "z": args.atom.z,
        "mass": args.atom.mass.token(),
    });
    let result = json!({
        "target": args.target,
        "unit": args.unit.token(),
        "q_fitted": fit.q_fitted,
        "conjugate_q": fit.conjugate_q,
        "residual": fit.residual,
        "iterations": fit.iterations,
        "bracket": [fit.bracket[0], fit.bracket[1]],
    });
    let text = match args.output.format {
        Format::Json => json_envelope("fit", params, result),
        Format::Table => {
            let rows = vec![
                vec!["q_fitted".to_string(), fmt_num(fit.q_fitted)],
                vec!["conjugate_q".to_string(), fmt_num(fit.conjugate_q)],
                vec![
                    format!("residual [{}]", args.unit.label()),
                    fmt_num(fit.residual),
                ],
                vec!["iterations".to_string(), fit.iterations.to_string()],
                vec![
                    "bracket".to_string(),
                    format!("[{}, {}]", fmt_num(fit.bracket[0]), fmt_num(fit.bracket[1])),
                ],
            ];
            let mut text = format!(
                "deformation fit  target={} {}  Z={}  mass={}\n\n",
                fmt_num(args.target),
                args.unit.label(),
                args.atom.z,
                args.atom.mass.token()
            );
            text.push_str(&text_table(&["quantity", "value"], &rows));
            text
        }
        Format::Csv => csv_table(
            &[
                "target",
                "unit",
                "q_fitted",
                "conjugate_q",
                "residual",
                "iterations",
            ],
            &[vec![
                fmt_num(args.target),
                args.unit.token().to_string(),
                fmt_num(fit.q_fitted),
                fmt_num(fit.conjugate_q),
                fmt_num(fit.residual),
                fit.iterations.to_string(),
            ]],
        ),
    };
    Ok(Rendered::ok(text))
}

struct VerifyRow {
    name: &'static str,
    residual: f64,
    threshold: f64,
    asserted: bool,
}

impl VerifyRow {
    fn passed(&self) -> Option<bool> {
        self.asserted.then(|| self.residual <= self.threshold)
    }

    fn status(&self) -> &'static str {
        match self.passed() {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "report",
        }
    }
}

/// Matrix construction agreement is structural, not a rounding budget, so it
/// gets a fixed threshold rather than --tol.
const CONSTRUCTION_TOL: f64 = 1e-12;

fn verify_rows(args: &VerifyArgs) -> Result<Vec<VerifyRow>> {
    let q = QParam::real(args.q)?;
    let basis = Arc::new(TruncatedBasis::new(args.n_max));
    let tol = args.tol;
    let mut rows = Vec::new();

    let boson = check_qboson_relations(&basis, &q)?;
    rows.push(VerifyRow {
        name: "q-boson relations",
        residual: boson.max_interior_residual,
        threshold: tol,
        asserted: true,
    });
    let su2 = check_su2_relations(&basis, &q)?;
    rows.push(VerifyRow {
        name: "su_q(2) relations",
        residual: su2.max_interior_residual,
        threshold: tol,
        asserted: true,
    });
    let su11 = check_su11_relations(&basis, &q)?;
    rows.push(VerifyRow {
        name: "su_q(1,1) relations",
        residual: su11.max_interior_residual,
        threshold: tol,
        asserted: true,
    });

    let casimir_worst = casimir_block_spectrum(&basis, &q)?
        .iter()
        .map(|b| b.max_deviation)
        .fold(0.0_f64, f64::max);
    rows.push(VerifyRow {
        name: "casimir block spectrum",
        residual: casimir_worst,
        threshold: tol,
        asserted: true,
    });

    let su2_bilinear = su2_generators(&basis, &q)?;
    let su2_direct = su2_generators_from_action(&basis, &q)?;
    let su2_gap = max_abs_difference(&su2_bilinear.plus, &su2_direct.plus)?
        .max(max_abs_difference(&su2_bilinear.minus, &su2_direct.minus)?)
        .max(max_abs_difference(&su2_bilinear.three, &su2_direct.three)?);
    rows.push(VerifyRow {
        name: "su_q(2) construction agreement",
        residual: su2_gap,
        threshold: CONSTRUCTION_TOL,
        asserted: true,
    });
    let su11_bilinear = su11_generators(&basis, &q)?;
    let su11_direct = su11_generators_from_action(&basis, &q)?;
    let su11_gap = max_abs_difference(&su11_bilinear.plus, &su11_direct.plus)?
        .max(max_abs_difference(
            &su11_bilinear.minus,
            &su11_direct.minus,
        )?)
        .max(max_abs_difference(
            &su11_bilinear.three,
            &su11_direct.three,
        )?);
    rows.push(VerifyRow {
        name: "su_q(1,1) construction agreement",
        residual: su11_gap,
        threshold: CONSTRUCTION_TOL,
        asserted: true,
    });

    // The ten bilinears close on a 10-dimensional algebra at q = 1 only;
    // away from it the residual is reported but nothing is asserted.
    let closure = so32_closure_residual(&basis, &q)?;
    rows.push(VerifyRow {
        name: "so(3,2) closure",
        residual: closure,
        threshold: tol,
        asserted: args.q == 1.0,
    });

    Ok(rows)
}

fn run_verify(args: &VerifyArgs) -> Result<Rendered> {
    let rows = verify_rows(args)?;
    let all_passed = rows.iter().all(|r| r.passed() != Some(false));
    let params = json!({
        "q": args.q,
        "n_max": args.n_max,
        "tol": args.tol,
    });
    let text = match args.output.format {
        Format::Json => {
            let checks: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "residual": r.residual,
                        "threshold": r.threshold,
                        "asserted": r.asserted,
                        "passed": r.passed(),
                    })
                })
                .collect();
            json_envelope(
                "verify",
                params,
                json!({
                    "q": args.q,
                    "n_max": args.n_max,
                    "tolerance": args.tol,
                    "all_passed": all_passed,
                    "checks": checks,
                }),
            )
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        fmt_num(r.residual),
                        fmt_num(r.threshold),
                        r.status().to_string(),
                    ]
                })
                .collect();
            let mut text = format!(
                "verify  q={}  n_max={}  tol={}\n\n",
                fmt_num(args.q),
                args.n_max,
                fmt_num(args.tol)
            );
            text.push_str(&text_table(
                &["check", "residual", "threshold", "status"],
                &cells,
            ));
            text.push_str(&format!(
                "\noverall: {}\n",
                if all_passed { "pass" } else { "FAIL" }
            ));
            text
        }
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        fmt_num(r.residual),
                        fmt_num(r.threshold),
                        r.status().to_string(),
                    ]
                })
                .collect();
            csv_table(&["check", "residual", "threshold", "status"], &cells)
        }
    };
    Ok(Rendered {
        text,
        verification_failed: !all_passed,
    })
}

fn run_constants(args: &ConstantsArgs) -> Result<Rendered> {
    let table = constants_table();
    let params = json!({});
    let text = match args.output.format {
        Format::Json => json_envelope(
            "constants",
            params,
            json!({
                "constants_version": CONSTANTS_VERSION,
                "constants": serde_json::to_value(&table).expect("serializable constants"),
            }),
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        fmt_num(c.value),
                        c.unit.to_string(),
                        c.description.to_string(),
                    ]
                })
                .collect();
            let mut text = format!("constants  version={CONSTANTS_VERSION}\n\n");
            text.push_str(&text_table(
                &["name", "value", "unit", "description"],
                &rows,
            ));
            text
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        fmt_num(c.value),
                        c.unit.to_string(),
                        c.description.to_string(),
                    ]
                })
                .collect();
            csv_table(&["name", "value", "unit", "description"], &rows)
        }
    };
    Ok(Rendered::ok(text))
}
