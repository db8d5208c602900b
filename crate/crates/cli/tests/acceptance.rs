//! Acceptance criteria. Criteria stated as command-line protocols (1, 2, 9,
//! 10) run the binary; the rest use the oracle-backed checks. Prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::path::Path;
use std::process::Command;

use idealpoly_cli::selftest::{self, CheckOutcome, TABLE1, TABLE2};
use idealpoly_core::specfun::lobachevsky;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_idealpoly");

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))
}

fn num(v: &Value, key: &str) -> Result<f64, String> {
    v[key].as_f64().ok_or(format!("missing {key}"))
}

fn outcome(id: u32, name: &'static str, r: Result<(bool, String), String>) -> CheckOutcome {
    match r {
        Ok((passed, detail)) => CheckOutcome { id, name, passed, detail },
        Err(detail) => CheckOutcome { id, name, passed: false, detail },
    }
}

fn table1() -> CheckOutcome {
    let run = || -> Result<(bool, String), String> {
        let mut ok = true;
        let mut parts = Vec::new();
        for (n, trials, expected, tol) in TABLE1 {
            let v = num(&cli(&["search", "--n", &n.to_string(), "--trials", &trials.to_string(), "--seed", "0"])?, "best_volume")?;
            ok &= (v - expected).abs() <= tol;
            parts.push(format!("n={n} {v:.6}/{expected}"));
        }
        // Not gated: reported next to the table values for inspection.
        for n in [9usize, 10] {
            let r = cli(&["search", "--n", &n.to_string(), "--trials", "300", "--seed", "0"])?;
            parts.push(format!("n={n} {:.6}/{} (ungated)", num(&r, "best_volume")?, r["table_volume"]));
        }
        Ok((ok, parts.join(", ")))
    };
    outcome(1, "maximal volumes for small n", run())
}

fn rational_angles(data: &Path) -> CheckOutcome {
    let run = || -> Result<(bool, String), String> {
        let tet = cli(&["optimize", data.join("tetrahedron.json").to_str().unwrap()])?;
        let oct = cli(&["optimize", data.join("octahedron.json").to_str().unwrap()])?;
        let is = |x: &Value, p: u64, q: u64| x["rational"]["p"] == p && x["rational"]["q"] == q;
        let corners = tet["corners"].as_array().ok_or("no corners")?;
        let dihedrals = oct["dihedrals"].as_array().ok_or("no dihedrals")?;
        let ok = corners.len() == 3
            && corners.iter().all(|c| is(c, 1, 3))
            && tet["corner_denominator"] == 3
            && dihedrals.len() == 12
            && dihedrals.iter().all(|d| is(d, 1, 2))
            && oct["dihedral_denominator"] == 2;
        Ok((ok, format!("corner q = {}, dihedral q = {}", tet["corner_denominator"], oct["dihedral_denominator"])))
    };
    outcome(2, "rational angles at optima", run())
}

/// Samples and fits every reference vertex count through the CLI.
fn fits(dir: &Path) -> Result<Vec<(usize, Value, String)>, String> {
    let mut out = Vec::new();
    for (n, _, _) in TABLE2 {
        let csv = dir.join(format!("sample_{n}.csv"));
        let fit = dir.join(format!("fit_{n}.json"));
        let ns = n.to_string();
        let status = Command::new(BIN)
            .args(["sample", "--n", &ns, "--count", "5000", "--seed", "0", "--vmax", "table", "-o", csv.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("sample n={n} failed"));
        }
        let v = cli(&["fit", csv.to_str().unwrap()])?;
        std::fs::write(&fit, v.to_string()).map_err(|e| e.to_string())?;
        out.push((n, v, fit.display().to_string()));
    }
    Ok(out)
}

fn table2(fits: &[(usize, Value, String)]) -> CheckOutcome {
    let run = || -> Result<(bool, String), String> {
        let get = |n: usize| fits.iter().find(|f| f.0 == n).map(|f| &f.1).ok_or(format!("no fit for n={n}"));
        let (f8, f12) = (get(8)?, get(12)?);
        let (mean, std, a, b, p) = (num(f8, "mean")?, num(f8, "std")?, num(f8, "alpha")?, num(f8, "beta")?, num(f8, "p_value")?);
        let mean12 = num(f12, "mean")?;
        let ok = (mean - 0.685).abs() <= 0.015
            && (std - 0.103).abs() <= 0.010
            && (a - 13.26).abs() <= 2.0
            && (b - 6.12).abs() <= 1.0
            && p > 0.01
            && (mean12 - 0.692).abs() <= 0.015;
        Ok((ok, format!("n=8 mean {mean:.4} std {std:.4} alpha {a:.3} beta {b:.3} p {p:.3}; n=12 mean {mean12:.4}")))
    };
    outcome(9, "normalized volume statistics", run())
}

fn scaling(fits: &[(usize, Value, String)], dir: &Path) -> CheckOutcome {
    let run = || -> Result<(bool, String), String> {
        let svg = dir.join("scaling.svg");
        let mut args = vec!["scaling", "--svg", svg.to_str().unwrap()];
        args.extend(fits.iter().map(|f| f.2.as_str()));
        let s = cli(&args)?;
        let (sa, sb) = (num(&s["alpha"], "slope")?, num(&s["beta"], "slope")?);
        let means: Vec<f64> = fits.iter().filter(|f| f.0 >= 8).map(|f| num(&f.1, "mean")).collect::<Result<_, _>>()?;
        let ok = (sa - 4.25).abs() <= 0.5 && (sb - 1.78).abs() <= 0.25 && means.iter().all(|m| (m - 0.69).abs() <= 0.02) && svg.exists();
        Ok((ok, format!("alpha slope {sa:.3}, beta slope {sb:.3}, means n>=8 {means:.4?}")))
    };
    outcome(10, "scaling fit", run())
}

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let dir = std::env::temp_dir().join(format!("idealpoly-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");

    let mut results = vec![
        table1(),
        rational_angles(&data),
        selftest::lambda_identities(&lobachevsky),
        selftest::uniqueness(),
        selftest::apex_invariance(),
        selftest::gradient_check(),
        selftest::delaunay_oracle(),
        selftest::layout_round_trip(),
    ];
    match fits(&dir) {
        Ok(f) => {
            results.push(table2(&f));
            results.push(scaling(&f, &dir));
        }
        Err(e) => {
            results.push(outcome(9, "normalized volume statistics", Err(e.clone())));
            results.push(outcome(10, "scaling fit", Err(e)));
        }
    }
    results.push(selftest::beta_mle_oracle());
    results.push(selftest::feasibility_oracle());
    let _ = std::fs::remove_dir_all(&dir);

    for r in &results {
        println!("criterion {:>2} {}: {} ({})", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
