use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qdiscord_core::discord::{self, Measure};
use qdiscord_core::ensembles::{self, Table1Row};
use qdiscord_core::gates::{self, GateMatrix};
use qdiscord_core::io::MatrixJson;
use qdiscord_core::linalg::{self, CMatrix, CVector};
use qdiscord_core::measurement::BasisSummary;
use qdiscord_core::tomography::{self, PreparationScheme};
use qdiscord_core::{BipartiteState, DensityMatrix, Subsystem};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::report::{fmt_f, ReportBundle};
use crate::reproduce;

pub struct Output {
    pub json: String,
    pub text: String,
    /// `false` maps to exit status 1.
    pub ok: bool,
}

impl Output {
    fn report(bundle: ReportBundle, text: String, ok: bool) -> Self {
        Output {
            json: bundle.to_json(),
            text,
            ok,
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Discord(a) => cmd_discord(a, cli.nats),
        Command::ZeroTest(a) => cmd_zero_test(a),
        Command::Ensembles(EnsemblesCommand::Table1) => cmd_table1(),
        Command::Gates(GatesCommand::Table2 { check }) => cmd_table2(*check, cli.tolerance),
        Command::Gates(GatesCommand::DiscordChange { unitary }) => {
            cmd_discord_change(unitary, cli.nats)
        }
        Command::Tomo(TomoCommand::Run {
            input,
            method,
            shots,
            seed,
        }) => cmd_tomo_run(input, *method, *shots, *seed),
        Command::Tomo(TomoCommand::Lemma2 { input }) => cmd_lemma2(input),
        Command::State(a) => cmd_state(a),
        Command::ReproducePaper(a) => reproduce::cmd_reproduce(a.only.as_deref(), cli.tolerance),
    }
}

fn read_matrix_json(path: &Path) -> CliResult<MatrixJson> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: MatrixJson = serde_json::from_str(&raw)
        .map_err(|e| CliError::Input(format!("{} is not a JSON matrix: {e}", path.display())))?;
    // shape problems are a malformed file, not an invalid state
    parsed
        .to_matrix()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(parsed)
}

pub fn load_state(path: &Path) -> CliResult<BipartiteState> {
    let m = read_matrix_json(path)?;
    let (da, db) = m
        .bipartition()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(BipartiteState::from_matrix(m.to_matrix()?, da, db)?)
}

pub fn builtin_unitary(name: &str) -> Option<GateMatrix> {
    match name {
        "cnot-target-a" => gates::cnot(Subsystem::B, Subsystem::A).ok(),
        "cnot-target-b" => gates::cnot(Subsystem::A, Subsystem::B).ok(),
        "identity" => Some(GateMatrix::identity(4)),
        _ => None,
    }
}

pub fn load_unitary(spec: &str) -> CliResult<GateMatrix> {
    if let Some(g) = builtin_unitary(spec) {
        return Ok(g);
    }
    let m = read_matrix_json(Path::new(spec))?;
    Ok(GateMatrix::new(m.to_matrix()?)?)
}

fn sides(s: SideArg) -> Vec<Subsystem> {
    match s {
        SideArg::A => vec![Subsystem::A],
        SideArg::B => vec![Subsystem::B],
        SideArg::Both => vec![Subsystem::A, Subsystem::B],
    }
}

fn unit(nats: bool) -> (&'static str, f64) {
    if nats {
        ("nats", std::f64::consts::LN_2)
    } else {
        ("bits", 1.0)
    }
}

#[derive(Serialize)]
struct DiscordValue {
    measure: String,
    side: Subsystem,
    value: f64,
    converged: bool,
    degenerate_reduced: bool,
    optimal_basis: BasisSummary,
    optimizer_evaluations_logged: usize,
}

fn cmd_discord(a: &DiscordArgs, nats: bool) -> CliResult<Output> {
    let s = load_state(&a.state)?;
    let measures = match a.measure {
        MeasureArg::D1 => vec![Measure::D1],
        MeasureArg::D2 => vec![Measure::D2],
        MeasureArg::D3 => vec![Measure::D3],
        MeasureArg::All => vec![Measure::D1, Measure::D2, Measure::D3],
    };
    let (unit_name, scale) = unit(nats);
    let mut values = Vec::new();
    let mut text = format!("{:<8}{:<6}{:>14}   basis\n", "measure", "side", unit_name);
    for side in sides(a.side) {
        for &m in &measures {
            let r = discord::discord(&s, side, m)?;
            let basis = BasisSummary::from(&r.optimal_basis);
            let angles = match (basis.theta, basis.phi) {
                (Some(t), Some(p)) => format!("θ = {t:.6}, φ = {p:.6}"),
                _ => format!("{}-dimensional basis", basis.dim),
            };
            writeln!(
                text,
                "{:<8}{:<6}{}   {angles}",
                format!("{m:?}"),
                side,
                fmt_f(r.value * scale)
            )
            .unwrap();
            values.push(DiscordValue {
                measure: format!("{m:?}"),
                side,
                value: r.value * scale,
                converged: r.converged,
                degenerate_reduced: r.degenerate_reduced,
                optimal_basis: basis,
                optimizer_evaluations_logged: r.optimizer_trace.len(),
            });
        }
    }
    let bundle = ReportBundle::new(
        "discord",
        json!({"state": a.state, "measure": format!("{:?}", a.measure), "side": format!("{:?}", a.side), "unit": unit_name}),
        json!({"unit": unit_name, "values": values}),
        &["D1 = min over projective bases of S(A) + S(B|Π) − S(AB); D2 replaces S(A) by the outcome entropy; D3 uses the eigenbasis of the measured reduced state"],
    )?;
    Ok(Output::report(bundle, text, true))
}

#[derive(Serialize)]
struct TermJson {
    weight: f64,
    projector: MatrixJson,
    conditional: MatrixJson,
}

fn cmd_zero_test(a: &ZeroTestArgs) -> CliResult<Output> {
    let s = load_state(&a.state)?;
    let mut results = Vec::new();
    let mut text = String::new();
    for side in sides(a.side) {
        let r = discord::is_zero_discord(&s, side)?;
        writeln!(
            text,
            "side {side}: {} (decided at {:?}; commutator norm {:.3e}{})",
            if r.is_zero {
                "zero discord"
            } else {
                "nonzero discord"
            },
            r.step,
            r.commutator_norm,
            r.reassembly_error
                .map_or(String::new(), |e| format!("; reassembly error {e:.3e}")),
        )
        .unwrap();
        let terms: Option<Vec<TermJson>> = r.decomposition.as_ref().map(|d| {
            d.iter()
                .map(|t| TermJson {
                    weight: t.weight,
                    projector: MatrixJson::from_matrix(&t.projector),
                    conditional: MatrixJson::from_matrix(t.conditional.matrix()),
                })
                .collect()
        });
        results.push(json!({
            "side": side,
            "is_zero": r.is_zero,
            "step": r.step,
            "commutator_norm": r.commutator_norm,
            "reassembly_error": r.reassembly_error,
            "d1_in_witness": r.d1_in_witness,
            "witness_basis": r.witness_basis.as_ref().map(BasisSummary::from),
            "decomposition": terms,
        }));
    }
    let bundle = ReportBundle::new(
        "zero-test",
        json!({"state": a.state, "side": format!("{:?}", a.side)}),
        json!({ "sides": results }),
        &["commutator [ρ_A⊗𝟙, ρ] screen, then reassembly from a measured witness basis"],
    )?;
    Ok(Output::report(bundle, text, true))
}

fn cmd_table1() -> CliResult<Output> {
    let rows: Vec<Table1Row> = ensembles::table1_report()?;
    let mut text = format!(
        "{:<22}{:<10}{:<10}{:<10}{:<12}{}\n",
        "ensemble", "side A", "side B", "expected", "reproduced", "description"
    );
    for r in &rows {
        writeln!(
            text,
            "{:<22}{:<10}{:<10}{:<10}{:<12}{}",
            r.label,
            format!("{:?}", r.side_a.class),
            format!("{:?}", r.side_b.class),
            format!("{:?}", r.expected_discord),
            r.reproduces(),
            r.description
        )
        .unwrap();
    }
    let ok = rows.iter().all(|r| r.reproduces());
    let bundle = ReportBundle::new(
        "ensembles table1",
        json!({}),
        json!({ "rows": rows, "all_reproduced": ok }),
        &[
            "teahouse: nine orthogonal 3⊗3 product states",
            "two-qubit rows: |00>,|11> mixture and 0.6 Φ⁺ + 0.4 Φ⁻",
        ],
    )?;
    Ok(Output::report(bundle, text, true))
}

fn ket_label(v: &CVector) -> String {
    v.iter()
        .map(|z| format!("{:+.3}{:+.3}i", z.re, z.im))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_table2(check: bool, tolerance: Option<f64>) -> CliResult<Output> {
    let tol = tolerance.unwrap_or(1e-12);
    let set = gates::l_set();
    let g = gates::cnot(Subsystem::A, Subsystem::B)?;
    let forward = gates::verify_gate_on_set(&g, &set)?;
    let reset = gates::reset_pairs(
        &GateMatrix::local(&gates::pauli_z(), &gates::pauli_x()),
        &set,
    )?;
    let forward_ok = forward.pairs.iter().all(|p| 1.0 - p.fidelity <= tol);
    let reset_ok = reset
        .pairs
        .iter()
        .filter(|p| p.label == 'a' || p.label == 'c')
        .all(|p| 1.0 - p.fidelity <= tol);
    let flips: Vec<_> = [
        ("identity", GateMatrix::identity(2)),
        ("X", gates::pauli_x()),
        ("Y", gates::pauli_y()),
        ("Z", gates::pauli_z()),
        ("H", gates::hadamard()),
        ("S", gates::phase_s()),
    ]
    .into_iter()
    .map(|(name, u)| {
        gates::classify_flip(&u).map(|f| json!({"gate": name, "tag": f.tag, "phase": f.phase}))
    })
    .collect::<Result<_, _>>()?;

    let mut text = String::from("CNOT (control A, target B) on the product-state set\n");
    for (p, c) in set.iter().zip(&forward.pairs) {
        writeln!(
            text,
            "  {}: [{}] -> [{}]  fidelity deficit {:.1e}",
            p.label,
            ket_label(&p.input),
            ket_label(&p.expected_output),
            1.0 - c.fidelity
        )
        .unwrap();
    }
    writeln!(
        text,
        "σz⊗σx reset of pairs a, c: {}",
        if reset_ok { "holds" } else { "fails" }
    )
    .unwrap();
    for f in &flips {
        writeln!(
            text,
            "  {:<9}{}",
            f["gate"].as_str().unwrap(),
            f["tag"].as_str().unwrap()
        )
        .unwrap();
    }
    let bundle = ReportBundle::new(
        "gates table2",
        json!({"check": check, "tolerance": tol}),
        json!({
            "pairs": forward.pairs,
            "all_pairs_pass": forward_ok,
            "reset_pairs": reset.pairs,
            "reset_a_c_pass": reset_ok,
            "flip_types": flips,
        }),
        &["CNOT with control A on products of σy and σx eigenstates; reset by σz⊗σx"],
    )?;
    Ok(Output::report(
        bundle,
        text,
        !check || (forward_ok && reset_ok),
    ))
}

fn cmd_discord_change(unitary: &str, nats: bool) -> CliResult<Output> {
    let g = load_unitary(unitary)?;
    let c = gates::ensemble_discord_change(&g, &gates::l_set_ensemble())?;
    let (unit_name, k) = unit(nats);
    let text = format!(
        "symmetric D2 ({unit_name}): before {} -> after {}\n  side A: {} -> {}\n  side B: {} -> {}\n",
        fmt_f(c.before * k),
        fmt_f(c.after * k),
        fmt_f(c.before_a * k),
        fmt_f(c.after_a * k),
        fmt_f(c.before_b * k),
        fmt_f(c.after_b * k)
    );
    let bundle = ReportBundle::new(
        "gates discord-change",
        json!({"unitary": unitary, "unit": unit_name}),
        json!({
            "unit": unit_name,
            "before": c.before * k, "after": c.after * k,
            "before_a": c.before_a * k, "after_a": c.after_a * k,
            "before_b": c.before_b * k, "after_b": c.after_b * k,
        }),
        &["equal-weight mixture of the CNOT input set; symmetric D2 = min(D2^A, D2^B)"],
    )?;
    Ok(Output::report(bundle, text, true))
}

pub fn matrix_text(m: &CMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:>8.4}{:+.4}i", m[(i, j)].re, m[(i, j)].im))
            .collect();
        writeln!(s, "  [{}]", row.join("  ")).unwrap();
    }
    s
}

fn cmd_tomo_run(
    input: &TomoInput,
    method: MethodArg,
    shots: Option<u64>,
    seed: u64,
) -> CliResult<Output> {
    let joint = load_state(&input.joint)?;
    let u = load_unitary(&input.unitary)?;
    let scheme = match method {
        MethodArg::MeasureRotate => PreparationScheme::measure_rotate_default(),
        MethodArg::MeasureOnly => PreparationScheme::measure_only_default(),
    };
    let run = match shots {
        None => tomography::run_tomography(&joint, u.matrix(), &scheme)?,
        Some(n) => tomography::run_tomography_sampled(&joint, u.matrix(), &scheme, n, seed)?,
    };
    let cp = tomography::cp_check(&run.chi);
    let mut text = format!(
        "χ (basis |0⟩⟨0|, |1⟩⟨0|, |0⟩⟨1|, |1⟩⟨1|):\n{}",
        matrix_text(&run.chi.chi)
    );
    writeln!(
        text,
        "eigenvalues: {}\ncompletely positive: {}",
        run.chi
            .eigenvalues
            .iter()
            .map(|x| format!("{x:.9}"))
            .collect::<Vec<_>>()
            .join(", "),
        cp.is_cp
    )
    .unwrap();
    for (label, env) in tomography::PROBE_LABELS.iter().zip(&run.env_states) {
        write!(text, "ω_{label}:\n{}", matrix_text(env.matrix())).unwrap();
    }
    let method_name = match method {
        MethodArg::MeasureRotate => "measure-rotate",
        MethodArg::MeasureOnly => "measure-only",
    };
    let bundle = ReportBundle::new(
        "tomo run",
        json!({"joint": input.joint, "unitary": input.unitary, "method": method_name, "shots": shots, "seed": seed}),
        json!({ "run": run, "cp": cp, "probe_labels": tomography::PROBE_LABELS }),
        &["standard process tomography with probes |0>, |1>, |+>, |+i>; χ by linear inversion, no positivity constraint"],
    )?;
    Ok(Output::report(bundle, text, true))
}

fn cmd_lemma2(input: &TomoInput) -> CliResult<Output> {
    let joint = load_state(&input.joint)?;
    let u = load_unitary(&input.unitary)?;
    let schemes = [
        PreparationScheme::measure_only_default(),
        PreparationScheme::measure_only_hadamard(),
    ];
    let report = tomography::lemma2_product_check(&joint, u.matrix(), &schemes)?;
    let text = format!(
        "product input: {}\nmax χ distance between probe sets: {:.3e}\nall reconstructions CP: {}\n",
        report.product_input, report.max_distance, report.all_cp
    );
    let bundle = ReportBundle::new(
        "tomo lemma2",
        json!({"joint": input.joint, "unitary": input.unitary, "probe_sets": ["computational", "hadamard"]}),
        &report,
        &["measure-only preparations with two complete probe sets; max-entry χ distance"],
    )?;
    Ok(Output::report(bundle, text, true))
}

fn qubit_state(spec: &str) -> CliResult<DensityMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: linalg::C64, b: linalg::C64| linalg::ket(&[a, b]);
    let ket = match spec {
        "0" | "H" => v(linalg::r(1.0), linalg::r(0.0)),
        "1" | "V" => v(linalg::r(0.0), linalg::r(1.0)),
        "+" | "D" => v(linalg::r(s), linalg::r(s)),
        "-" | "A" => v(linalg::r(s), linalg::r(-s)),
        "+i" | "R" => v(linalg::r(s), linalg::c(0.0, s)),
        "-i" | "L" => v(linalg::r(s), linalg::c(0.0, -s)),
        "mixed" => return Ok(DensityMatrix::maximally_mixed(2)),
        other => {
            return Err(CliError::Input(format!(
                "unknown single-qubit state '{other}'"
            )))
        }
    };
    Ok(DensityMatrix::pure(&ket)?)
}

pub fn build_state(family: &StateFamily) -> CliResult<(String, BipartiteState)> {
    Ok(match family {
        StateFamily::Exdisc { b, c } => (
            format!("exdisc(b={b}, c={c})"),
            discord::ex_disc_state(*b, *c)?,
        ),
        StateFamily::Bell => {
            let k = |i| linalg::kron_vec(&linalg::basis_ket(2, i), &linalg::basis_ket(2, i));
            let v = (k(0) + k(1)).unscale(2f64.sqrt());
            (
                "bell".into(),
                BipartiteState::new(DensityMatrix::pure(&v)?, 2, 2)?,
            )
        }
        StateFamily::Teahouse { weights } => {
            let e = match weights {
                Some(w) => ensembles::teahouse_states().with_weights(w)?,
                None => ensembles::teahouse_states(),
            };
            ("teahouse".into(), ensembles::ensemble_density(&e))
        }
        StateFamily::Lemma1 => {
            let mut m = CMatrix::zeros(4, 4);
            m[(0, 0)] = linalg::r(0.5);
            m[(3, 3)] = linalg::r(0.5);
            ("lemma1".into(), BipartiteState::two_qubit(m)?)
        }
        StateFamily::Table2Ensemble => (
            "table2-ensemble".into(),
            ensembles::ensemble_density(&gates::l_set_ensemble()),
        ),
        StateFamily::Product { spec_a, spec_b } => (
            format!("product({spec_a}, {spec_b})"),
            qdiscord_core::state::tensor_product(&qubit_state(spec_a)?, &qubit_state(spec_b)?)?,
        ),
    })
}

fn cmd_state(a: &StateArgs) -> CliResult<Output> {
    let (family, s) = build_state(&a.family)?;
    let body =
        serde_json::to_string_pretty(&MatrixJson::from(&s)).expect("matrix serializes") + "\n";
    match &a.out {
        None => Ok(Output {
            json: body.clone(),
            text: body,
            ok: true,
        }),
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            let bundle = ReportBundle::new(
                "state",
                json!({"family": family, "out": path}),
                json!({"path": path, "dims": [s.dim_a(), s.dim_b()]}),
                &[],
            )?;
            Ok(Output::report(
                bundle,
                format!("wrote {family} to {}\n", path.display()),
                true,
            ))
        }
    }
}
