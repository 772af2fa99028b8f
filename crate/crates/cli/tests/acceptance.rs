//! Acceptance suite. Runs every acceptance criterion, prints one
//! `ACCEPTANCE <n> PASS|FAIL <detail>` line per criterion and exits nonzero
//! when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use layerforge::css::{fixtures, validate_css, ArrangementMode, CssCode};
use layerforge::error::Side;
use layerforge::f2::{BitRow, RowBasis, SparseBoolMatrix};
use layerforge::grid::{edge_cell, Cell};
use layerforge::layers::{build, lift_logical, BuildConfig, LayerCode, LayerKind};
use layerforge::routing::{audit_plan, plan, PlanOptions};
use layerforge::verify::oracles::{checks_and_stabilizers, DISTANCE_ENUMERATION_LIMIT};
use layerforge::verify::{
    distance_oracle, energy_barrier_oracle, extract_logical, homologous, verify_bundle, Cleaner, Distance,
    VerificationReport, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn layerforge(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_layerforge"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("LAYERFORGE_THREADS", t),
        None => cmd.env_remove("LAYERFORGE_THREADS"),
    };
    cmd.output().expect("the layerforge binary runs")
}

/// Outcome of one criterion: a summary and the list of violations.
type Outcome = (String, Vec<String>);

fn entry_passed(report: &VerificationReport, name: &str, failures: &mut Vec<String>) {
    match report.entry(name) {
        Some(e) if e.passed => {}
        Some(e) => failures.push(format!("{name}: measured {} bound {}", e.measured, e.bound)),
        None => failures.push(format!("{name}: missing from the report")),
    }
}

fn max_degree(code: &CssCode) -> usize {
    code.hx.col_weights().iter().zip(code.hz.col_weights()).map(|(a, b)| a + b).max().unwrap_or(0)
}

/// Grade-1 cells per ambient edge, recomputed from the cell table: check-layer
/// cells sit on their own coordinates, qubit-layer cells one doubled unit up in z-hat.
fn edge_load(lc: &LayerCode) -> usize {
    let mut counts: std::collections::HashMap<Vec<i32>, usize> = std::collections::HashMap::new();
    for kind in LayerKind::ALL {
        for (_, c) in lc.cells.get(kind, 1) {
            let mut c = c.clone();
            if kind == LayerKind::Q {
                *c.last_mut().expect("cells have coordinates") += 1;
            }
            *counts.entry(c).or_default() += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

fn criterion_1_shor_4d() -> Outcome {
    let dir = TempDir::new().unwrap();
    let bundle = dir.path().join("shor4.json");
    let start = Instant::now();
    let out = layerforge(
        &[
            "build",
            "--input",
            fixture("shor.json").to_str().unwrap(),
            "--dim",
            "4",
            "--arrangement",
            "spiral",
            "--out",
            bundle.to_str().unwrap(),
        ],
        None,
    );
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    if !out.status.success() {
        failures.push(format!("build exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
        return ("build".into(), failures);
    }
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("build took {elapsed:?}"));
    }
    let lc = LayerCode::from_json(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    let report = verify_bundle(&lc, &VerifyOptions::default());
    let code = lc.output_code().unwrap();
    if report.k != 1 || code.k() != 1 {
        failures.push(format!("k(C) = {}", report.k));
    }
    let weight = code.hx.max_row_weight().max(code.hz.max_row_weight());
    if weight > 9 {
        failures.push(format!("max check weight {weight} > 9"));
    }
    let degree = max_degree(&code);
    if degree > 8 {
        failures.push(format!("max qubit degree {degree} > 8"));
    }
    let load = edge_load(&lc);
    if load > 3 {
        failures.push(format!("{load} grade-1 cells on one edge"));
    }
    if !lc.compatibility_defect().unwrap().is_zero() {
        failures.push("compatibility identity".into());
    }
    for name in [
        "compatibility identity",
        "X-layer H1",
        "Z-layer H1",
        "qubit-layer H1",
        "logical qubits k(C) = k(A)",
        "edge congestion",
    ] {
        entry_passed(&report, name, &mut failures);
    }
    let verify = layerforge(&["verify", "--bundle", bundle.to_str().unwrap()], None);
    if !verify.status.success() {
        failures.push(format!("verify exited with {}", verify.status));
    }
    (
        format!(
            "n={} k={} weight={weight} degree={degree} edge load={load} build {elapsed:.2?}",
            code.num_qubits(),
            report.k
        ),
        failures,
    )
}

/// Random 5D fixtures: 8 qubits on [2]^3 and 27 qubits on [3]^3.
fn five_d_fixtures() -> Vec<(String, CssCode)> {
    vec![
        ("random n=8".into(), common::random_css(8, 4, 3, 8)),
        ("random n=27".into(), common::random_css(27, 4, 3, 27)),
    ]
}

fn criterion_2_five_d() -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (name, code) in five_d_fixtures() {
        let profile = validate_css(&code).unwrap();
        assert!(profile.w() <= 4 && profile.q() <= 3, "{name} violates the weight profile");
        let start = Instant::now();
        let lc = match build(&code, &BuildConfig::new(5, ArrangementMode::RowMajor)) {
            Ok(lc) => lc,
            Err(err) => {
                failures.push(format!("{name}: build failed: {err}"));
                continue;
            }
        };
        let report = verify_bundle(&lc, &VerifyOptions::default());
        let elapsed = start.elapsed();
        let out = lc.output_code().unwrap();
        let weight = out.hx.max_row_weight().max(out.hz.max_row_weight());
        let degree = max_degree(&out);
        let load = edge_load(&lc);
        if lc.extents.side != if code.num_qubits() == 8 { 2 } else { 3 } {
            failures.push(format!("{name}: side {}", lc.extents.side));
        }
        if weight > 12 {
            failures.push(format!("{name}: check weight {weight} > 12"));
        }
        if degree > 10 {
            failures.push(format!("{name}: degree {degree} > 10"));
        }
        if load > 4 {
            failures.push(format!("{name}: {load} cells on one edge"));
        }
        if out.k() != code.k() {
            failures.push(format!("{name}: k(C) = {} but k(A) = {}", out.k(), code.k()));
        }
        if elapsed >= Duration::from_secs(300) {
            failures.push(format!("{name}: took {elapsed:?}"));
        }
        for entry in [
            "X-layer H1",
            "Z-layer H1",
            "qubit-layer H1",
            "logical qubits k(C) = k(A)",
            "chain condition",
            "compatibility identity",
        ] {
            entry_passed(&report, entry, &mut failures);
        }
        summary.push(format!(
            "{name}: n={} k={} weight={weight} degree={degree} load={load} {elapsed:.2?}",
            out.num_qubits(),
            out.k()
        ));
    }
    (summary.join(", "), failures)
}

/// Largest weight budget whose exhaustive enumeration over `n` qubits fits the oracle's limit.
fn affordable_budget(n: usize, want: usize) -> usize {
    let mut total: u128 = 1;
    let mut c: u128 = 1;
    for w in 1..=want.min(n) {
        c = c * (n + 1 - w) as u128 / w as u128;
        total += c;
        if total > DISTANCE_ENUMERATION_LIMIT {
            return w - 1;
        }
    }
    want.min(n)
}

fn criterion_3_distance_sandwich() -> Outcome {
    let code = fixtures::four_two_two();
    let da = match distance_oracle(&code, Side::X, code.num_qubits()).unwrap() {
        Distance::Exact(d) => d,
        other => panic!("[[4,2,2]] distance {other:?}"),
    };
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for d in [3, 4] {
        let lc = build(&code, &BuildConfig::new(d, ArrangementMode::RowMajor)).unwrap();
        let out = lc.output_code().unwrap();
        let l_z = lc.extents.l_z;
        let budget = affordable_budget(out.num_qubits(), l_z * da);
        let dc = distance_oracle(&out, Side::X, budget).unwrap();
        let lower = match dc {
            Distance::Exact(c) => c >= da,
            Distance::GreaterThan(b) => b + 1 >= da,
            Distance::NoLogicals => false,
        };
        let mut upper = matches!(dc, Distance::Exact(c) if c <= l_z * da);
        if !lower {
            failures.push(format!("D={d}: d_X(C) {dc:?} < d_X(A) = {da}"));
        }
        let cleaner = Cleaner::new(&lc).unwrap();
        for l in code.x_logical_basis() {
            let support = l.support();
            let lift = lift_logical(&lc, &support).unwrap();
            let extracted = extract_logical(&cleaner, &lift.chain).unwrap();
            let nontrivial = homologous(&lc, &extracted, &support);
            // A nontrivial lift of weight <= L_Z d_X(A) also witnesses the upper bound.
            if nontrivial && support.len() == da && lift.chain.len() <= l_z * da {
                upper = true;
            }
            if lift.chain.len() != l_z * support.len() {
                failures.push(format!(
                    "D={d}: lift of {support:?} has weight {} = {} (strings) + {} (Z-layer connectors), expected L_Z |l| = {}",
                    lift.chain.len(),
                    lift.string_weight,
                    lift.connector_weight,
                    l_z * support.len()
                ));
            }
        }
        if !upper {
            failures.push(format!("D={d}: upper bound L_Z d_X(A) = {} not certified by {dc:?}", l_z * da));
        }
        summary.push(format!("D={d}: d_X(A)={da} d_X(C)={dc:?} L_Z={l_z}"));
    }
    (summary.join(", "), failures)
}

/// Bundles used by the cleaning suite: the Shor 4D fixture, the 8-qubit 5D
/// fixture and the [[4,2,2]] 3D build.
fn cleaning_fixtures() -> Vec<(String, LayerCode)> {
    let mut out = vec![(
        "shor D=4".to_string(),
        build(&fixtures::shor(), &BuildConfig::new(4, ArrangementMode::Spiral)).unwrap(),
    )];
    let (name, code) = five_d_fixtures().remove(0);
    out.push((format!("{name} D=5"), build(&code, &BuildConfig::new(5, ArrangementMode::RowMajor)).unwrap()));
    out.push((
        "[[4,2,2]] D=3".into(),
        build(&fixtures::four_two_two(), &BuildConfig::new(3, ArrangementMode::RowMajor)).unwrap(),
    ));
    out
}

/// Cleaning bound recomputed from the input weight profile.
fn lemma_bound(lc: &LayerCode, kind: LayerKind, s: usize) -> usize {
    let p = validate_css(&lc.code).unwrap();
    match (kind, lc.dimension) {
        (LayerKind::X, 3) => (1 + p.w_x) * s,
        (LayerKind::X, 4) => (1 + p.w_x * p.q_z * p.w_x.min(p.w_z)) * s,
        (LayerKind::X, _) => (1 + p.w() * p.w() * p.q()) * s,
        (LayerKind::Q, _) => (1 + p.q_z) * s,
        (LayerKind::Z, _) => 2,
    }
}

/// Largest syndrome weight of the prefixes of `flips`.
fn path_energy(d1_t: &SparseBoolMatrix, flips: &[usize]) -> usize {
    let mut syndrome = BTreeSet::new();
    let mut worst = 0;
    for &e in flips {
        for &r in d1_t.row(e) {
            if !syndrome.remove(&r) {
                syndrome.insert(r);
            }
        }
        worst = worst.max(syndrome.len());
    }
    worst
}

fn criterion_4_cleaning() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut per_kind = [0usize; 3];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, lc) in cleaning_fixtures() {
        let cleaner = Cleaner::new(&lc).unwrap();
        let (_, d1) = lc.total_differentials().unwrap();
        let d1_t = d1.transpose();
        let rounds = 2000 / lc.layers.len() + 1;
        for (layer, spec) in lc.layers.iter().enumerate() {
            let kind = spec.kind;
            let r0: Vec<usize> = lc.layer_range(layer, 0).collect();
            let r1: Vec<usize> = lc.layer_range(layer, 1).collect();
            if r0.is_empty() {
                continue;
            }
            let off1 = lc.cells.offset(kind, 1);
            let block = match kind {
                LayerKind::X => &lc.blocks.dx1,
                LayerKind::Q => &lc.blocks.dq1,
                LayerKind::Z => &lc.blocks.dz1,
            };
            let local_d1 = block.submatrix(&r0, &r1);
            for round in 0..rounds {
                // Single-point syndromes first, then boundaries of random chains.
                let sigma: Vec<usize> = if round < r0.len().min(rounds / 2) {
                    let v = r0[rng.random_range(0..r0.len())];
                    let solvable = kind == LayerKind::Z || layerforge::f2::solve(&local_d1, &[v - r0[0]]).is_some();
                    if !solvable {
                        continue;
                    }
                    vec![v]
                } else if r1.is_empty() {
                    continue;
                } else {
                    let size = rng.random_range(1..=4.min(r1.len()));
                    let chain: BTreeSet<usize> = (0..size).map(|_| off1 + r1[rng.random_range(0..r1.len())]).collect();
                    let s = cleaner.layer_syndrome(layer, &chain.into_iter().collect::<Vec<_>>());
                    if s.is_empty() {
                        continue;
                    }
                    s
                };
                count += 1;
                per_kind[kind.index()] += 1;
                let result = match cleaner.clean_syndrome(layer, &sigma) {
                    Ok(r) => r,
                    Err(err) => {
                        failures.push(format!("{name} {kind:?} {}: {err}", spec.owner));
                        continue;
                    }
                };
                let layer_cells: BTreeSet<usize> = r1.iter().map(|i| off1 + i).collect();
                if !result.correction.iter().all(|c| layer_cells.contains(c)) {
                    failures.push(format!("{name} {kind:?} {}: correction leaves the layer", spec.owner));
                }
                if result.path.endpoint() != result.correction {
                    failures.push(format!("{name} {kind:?} {}: path does not end at the correction", spec.owner));
                }
                let mut expected: BTreeSet<usize> = sigma.iter().copied().collect();
                if let Some(anchor) = result.anchor {
                    let local = anchor - lc.cells.offset(LayerKind::Z, 0);
                    if !expected.remove(&local) {
                        expected.insert(local);
                    }
                }
                if kind != LayerKind::Z && result.anchor.is_some() {
                    failures.push(format!("{name} {kind:?}: anchor outside a Z layer"));
                }
                if kind == LayerKind::Z && (sigma.len() % 2 == 1) != result.anchor.is_some() {
                    failures.push(format!("{name} Z {}: anchor used for |sigma| = {}", spec.owner, sigma.len()));
                }
                let got: BTreeSet<usize> = cleaner.layer_syndrome(layer, &result.correction).into_iter().collect();
                if got != expected {
                    failures.push(format!("{name} {kind:?} {}: boundary {got:?} != syndrome {expected:?}", spec.owner));
                }
                let energy = if kind == LayerKind::Z {
                    let mut bounds = result.path.segments.clone();
                    bounds.push(result.path.flips.len());
                    bounds.windows(2).map(|w| path_energy(&d1_t, &result.path.flips[w[0]..w[1]])).max().unwrap_or(0)
                } else {
                    path_energy(&d1_t, &result.path.flips)
                };
                let bound = lemma_bound(&lc, kind, sigma.len());
                if energy > bound || energy != result.energy {
                    failures.push(format!(
                        "{name} {kind:?} {}: |sigma|={} energy {energy} (reported {}) bound {bound}",
                        spec.owner,
                        sigma.len(),
                        result.energy
                    ));
                }
            }
        }
    }
    if count < 1000 {
        failures.push(format!("only {count} syndromes"));
    }
    failures.truncate(10);
    (format!("{count} syndromes (X {}, qubit {}, Z {})", per_kind[0], per_kind[1], per_kind[2]), failures)
}

/// Bundles used by the round-trip suite.
fn round_trip_fixtures() -> Vec<(String, LayerCode)> {
    let mut codes: Vec<(String, CssCode)> = vec![
        ("shor".into(), fixtures::shor()),
        ("[[4,2,2]]".into(), fixtures::four_two_two()),
        ("repetition5".into(), fixtures::repetition_z(5)),
    ];
    codes.extend(five_d_fixtures());
    let mut out = Vec::new();
    for (name, code) in codes {
        for d in [3, 4, 5] {
            let arrangement =
                if name == "shor" && d == 4 { ArrangementMode::Spiral } else { ArrangementMode::RowMajor };
            out.push((format!("{name} D={d}"), build(&code, &BuildConfig::new(d, arrangement)).unwrap()));
        }
    }
    out
}

fn criterion_5_round_trip() -> Outcome {
    let mut failures = Vec::new();
    let mut logicals = 0;
    let mut stabilizers = 0;
    for (name, lc) in round_trip_fixtures() {
        let cleaner = Cleaner::new(&lc).unwrap();
        let out = lc.output_code().unwrap();
        let output_stabilizers = RowBasis::from_matrix(&out.hx);
        for l in lc.code.x_logical_basis() {
            let support = l.support();
            logicals += 1;
            let lift = lift_logical(&lc, &support).unwrap();
            match extract_logical(&cleaner, &lift.chain) {
                Ok(e) if homologous(&lc, &e, &support) => {}
                Ok(e) => failures.push(format!("{name}: {support:?} came back as {e:?}")),
                Err(err) => failures.push(format!("{name}: {support:?}: {err}")),
            }
        }
        for (i, row) in lc.code.hx.to_bit_rows().iter().enumerate() {
            stabilizers += 1;
            let lift = lift_logical(&lc, &row.support()).unwrap();
            if !output_stabilizers.contains(&BitRow::from_support(out.num_qubits(), &lift.chain)) {
                failures.push(format!("{name}: lift of X-check {i} is not an output stabilizer"));
            }
            match extract_logical(&cleaner, &lift.chain) {
                Ok(e) if homologous(&lc, &e, &[]) => {}
                Ok(e) => failures.push(format!("{name}: X-check {i} came back as {e:?}")),
                Err(err) => failures.push(format!("{name}: X-check {i}: {err}")),
            }
        }
        // Output stabilizers (columns of d2) extract to input stabilizers.
        let (d2, _) = lc.total_differentials().unwrap();
        let d2_t = d2.transpose();
        for c in (0..d2_t.rows()).step_by((d2_t.rows() / 50).max(1)) {
            stabilizers += 1;
            match extract_logical(&cleaner, d2_t.row(c)) {
                Ok(e) if homologous(&lc, &e, &[]) => {}
                Ok(e) => failures.push(format!("{name}: output stabilizer {c} came back as {e:?}")),
                Err(err) => failures.push(format!("{name}: output stabilizer {c}: {err}")),
            }
        }
    }
    failures.truncate(10);
    (format!("{logicals} logical representatives, {stabilizers} stabilizers"), failures)
}

/// Threshold search: the smallest `t` such that a nontrivial logical is
/// reachable from the identity through error patterns whose syndrome weight
/// never exceeds `t`, flipping one qubit at a time.
fn threshold_barrier(code: &CssCode, kind: Side) -> Option<usize> {
    let (checks, stabilizers) = checks_and_stabilizers(code, kind);
    let n = code.num_qubits();
    let mut cols = vec![0u64; n];
    for (r, c) in checks.entries() {
        cols[c] |= 1 << r;
    }
    let gens: Vec<u32> =
        stabilizers.to_bit_rows().iter().map(|r| r.support().iter().fold(0u32, |m, &q| m | 1 << q)).collect();
    let mut span: HashSet<u32> = HashSet::from([0]);
    for g in gens {
        let more: Vec<u32> = span.iter().map(|s| s ^ g).collect();
        span.extend(more);
    }
    let syndrome =
        |mask: u32| (0..n).filter(|&i| mask >> i & 1 == 1).fold(0u64, |s, i| s ^ cols[i]).count_ones() as usize;
    let logical_exists = (1u32..1 << n).any(|m| syndrome(m) == 0 && !span.contains(&m));
    if !logical_exists {
        return None;
    }
    for t in 0..=checks.rows() {
        let mut seen = vec![false; 1 << n];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        while let Some(m) = queue.pop_front() {
            if m != 0 && syndrome(m) == 0 && !span.contains(&m) {
                return Some(t);
            }
            for i in 0..n {
                let next = m ^ (1 << i);
                if !seen[next as usize] && syndrome(next) <= t {
                    seen[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    unreachable!("a logical exists, so some threshold reaches it")
}

fn criterion_6_energy_barrier() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=8 {
        let barrier = energy_barrier_oracle(&fixtures::repetition_z(n), Side::X, 20).unwrap();
        if barrier != Some(1) {
            failures.push(format!("repetition code n={n}: barrier {barrier:?}"));
        }
    }
    let mut codes: Vec<(String, CssCode)> = vec![
        ("shor".into(), fixtures::shor()),
        ("[[4,2,2]]".into(), fixtures::four_two_two()),
        ("single qubit".into(), fixtures::single_qubit()),
    ];
    codes.extend((2..=12).map(|n| (format!("repetition {n}"), fixtures::repetition_z(n))));
    codes.extend((0..60).map(|s| {
        let n = 3 + (s as usize) % 10;
        (format!("random n={n} seed={s}"), common::random_css(n, 4, 3, 600 + s))
    }));
    let mut compared = 0;
    for (name, code) in &codes {
        for side in [Side::X, Side::Z] {
            compared += 1;
            let a = energy_barrier_oracle(code, side, 12).unwrap();
            let b = threshold_barrier(code, side);
            if a != b {
                failures.push(format!("{name} {side}: bottleneck search {a:?}, threshold search {b:?}"));
            }
        }
    }
    (format!("repetition barrier 1 for n=2..8; {compared} oracle comparisons on {} codes", codes.len()), failures)
}

fn criterion_7_routing() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut counts = [0usize; 2];
    for i in 0..100u64 {
        let f = if i % 2 == 0 { 2 } else { 3 };
        let side = rng.random_range(2..=if f == 2 { 4 } else { 3 });
        let lo = if side == 2 { 2 } else { (side - 1usize).pow(f as u32) + 1 };
        let n = rng.random_range(lo..=side.pow(f as u32));
        let code = common::random_css(n, 4, 3, 7000 + i);
        let arr = layerforge::css::arrange_qubits(&code, f, &ArrangementMode::RowMajor).unwrap();
        let label = format!("code {i} (n={n}, f={f})");
        let p = match plan(&code, &arr, f + 2, PlanOptions::default()) {
            Ok(p) => p,
            Err(err) => {
                failures.push(format!("{label}: {err}"));
                continue;
            }
        };
        counts[f - 2] += 1;
        let audit = audit_plan(&code, &arr, &p).unwrap();
        if audit.eta_edge_multiplicity > 1 {
            failures.push(format!("{label}: eta class shares an edge"));
        }
        if audit.eta_omega_face_multiplicity > 1 || (f == 2 && audit.eta_omega_class_size > 1) {
            failures.push(format!("{label}: (eta, omega) constraint"));
        }
        // Independent recomputation of the per-check constraints.
        for checks in [&p.x_checks, &p.z_checks] {
            let mut edges: HashSet<(usize, &Cell)> = HashSet::new();
            for c in checks.iter() {
                for e in &c.graph.edges {
                    if !edges.insert((c.eta, e)) {
                        failures.push(format!("{label}: edge {e:?} used twice at eta {}", c.eta));
                    }
                }
            }
        }
        if let Some(table) = &p.color_routes {
            let len = table.waypoints.first().map_or(0, Vec::len);
            for s in 0..len {
                let mut load: std::collections::HashMap<&Vec<usize>, usize> = std::collections::HashMap::new();
                for w in &table.waypoints {
                    *load.entry(&w[s]).or_default() += 1;
                }
                let worst = load.into_values().max().unwrap_or(0);
                if worst > table.density_bound {
                    failures.push(format!("{label}: waypoint {s} load {worst} > {}", table.density_bound));
                }
            }
        } else if f == 3 {
            failures.push(format!("{label}: no color routes"));
        }
        for d in &p.defects {
            let overlap: BTreeSet<Vec<usize>> = layerforge::css::overlap(&code, &arr, d.x, d.z)
                .unwrap()
                .iter()
                .map(|&q| arr.point(q).clone())
                .collect();
            let mut ends: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut used_vertices: HashSet<&Vec<usize>> = HashSet::new();
            let mut used_edges: HashSet<Cell> = HashSet::new();
            for path in &d.paths {
                if !path.windows(2).all(|w| w[0].iter().zip(&w[1]).map(|(a, b)| a.abs_diff(*b)).sum::<usize>() == 1) {
                    failures.push(format!("{label}: defect path is not a grid walk"));
                }
                if !p.x_checks[d.x].graph.contains_path(path) || !p.z_checks[d.z].graph.contains_path(path) {
                    failures.push(format!("{label}: defect path leaves the check geometries"));
                }
                for end in [&path[0], &path[path.len() - 1]] {
                    if !ends.remove(end) {
                        ends.insert(end.clone());
                    }
                }
                if f == 2 {
                    for v in path {
                        if !used_vertices.insert(v) {
                            failures
                                .push(format!("{label}: 4D defect routes of ({}, {}) share vertex {v:?}", d.x, d.z));
                        }
                    }
                } else {
                    for w in path.windows(2) {
                        if !used_edges.insert(edge_cell(&w[0], &w[1])) {
                            failures.push(format!("{label}: 5D defect paths of ({}, {}) share an edge", d.x, d.z));
                        }
                    }
                }
            }
            if ends != overlap {
                failures.push(format!("{label}: defect boundary {ends:?} != overlap {overlap:?}"));
            }
        }
    }
    failures.truncate(10);
    (format!("{} codes with f=2, {} with f=3", counts[0], counts[1]), failures)
}

fn criterion_8_determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let mut failures = Vec::new();
    let mut compared = 0;
    let runs: [(&str, &str, &str); 4] = [
        ("shor.json", "4", "spiral"),
        ("shor.json", "3", "row-major"),
        ("four_two_two.json", "5", "row-major"),
        ("repetition5.json", "4", "row-major"),
    ];
    for (input, dim, arrangement) in runs {
        let tag = format!("{input}-{dim}");
        let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
        for (run, threads) in [(0, None), (1, Some("1")), (2, Some("4"))] {
            let b = path(&format!("{tag}-{run}.bundle.json"));
            let r = path(&format!("{tag}-{run}.report.json"));
            let routes = path(&format!("{tag}-{run}.routes.json"));
            let prefix = path(&format!("{tag}-{run}.export"));
            let commands: Vec<Vec<String>> = vec![
                vec![
                    "build".into(),
                    "--input".into(),
                    fixture(input).to_str().unwrap().into(),
                    "--dim".into(),
                    dim.into(),
                    "--arrangement".into(),
                    arrangement.into(),
                    "--out".into(),
                    b.clone(),
                ],
                vec![
                    "verify".into(),
                    "--bundle".into(),
                    b.clone(),
                    "--report".into(),
                    r.clone(),
                    "--budget-distance".into(),
                    "2".into(),
                ],
                vec!["report".into(), "routes".into(), "--bundle".into(), b.clone(), "--out".into(), routes.clone()],
                vec![
                    "export".into(),
                    "--bundle".into(),
                    b.clone(),
                    "--format".into(),
                    "alist".into(),
                    "--out".into(),
                    prefix.clone(),
                ],
                vec![
                    "export".into(),
                    "--bundle".into(),
                    b.clone(),
                    "--format".into(),
                    "json".into(),
                    "--out".into(),
                    prefix.clone(),
                ],
            ];
            let mut bytes = Vec::new();
            for args in &commands {
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                let out = layerforge(&args, threads);
                bytes.push(out.stdout);
                bytes.push(out.stderr);
                bytes.push(out.status.code().unwrap_or(-1).to_string().into_bytes());
            }
            for file in
                [b, r, routes, format!("{prefix}_hx.alist"), format!("{prefix}_hz.alist"), format!("{prefix}.json")]
            {
                bytes.push(std::fs::read(&file).unwrap_or_else(|_| panic!("{file} was written")));
            }
            outputs.push(bytes);
        }
        for other in &outputs[1..] {
            compared += 1;
            if other != &outputs[0] {
                let first = other.iter().zip(&outputs[0]).position(|(a, b)| a != b);
                failures.push(format!("{tag}: output {first:?} differs between runs"));
            }
        }
    }
    (format!("{compared} repeated runs of build, verify, report routes and export agree byte for byte"), failures)
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1_shor_4d),
        (2, criterion_2_five_d),
        (3, criterion_3_distance_sandwich),
        (4, criterion_4_cleaning),
        (5, criterion_5_round_trip),
        (6, criterion_6_energy_barrier),
        (7, criterion_7_routing),
        (8, criterion_8_determinism),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let (summary, failures) = match std::panic::catch_unwind(run) {
            Ok(outcome) => outcome,
            Err(panic) => {
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                ("panicked".to_string(), vec![message])
            }
        };
        let elapsed = start.elapsed();
        if failures.is_empty() {
            println!("ACCEPTANCE {n} PASS {summary} ({elapsed:.1?})");
        } else {
            failed += 1;
            println!("ACCEPTANCE {n} FAIL {summary} ({elapsed:.1?}); {}", failures.join("; "));
        }
    }
    if failed > 0 {
        println!("{failed} of 8 acceptance criteria failed");
        std::process::exit(1);
    }
}
