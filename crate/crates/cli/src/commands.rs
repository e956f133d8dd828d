//! The six subcommands. Each returns the process exit code: 0 yes, 1 no,
//! 2 indeterminate, with errors bubbling up to exit 3 in `main`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use photonic_ssp::ssp::sum_of_first_primes;
use photonic_ssp::{
    apply_noise, build_network, classify, propagate, tolerance_band, Answer, Error, FisherModel,
    IntensityDistribution, OpticalParams, SnrModel, SspInstance, SubsetCountTable,
};

use crate::config::RunConfig;

/// Version stamped into every output header.
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The `# key=value` header carried by CSV outputs.
fn csv_header(config: &RunConfig, hash: &str) -> String {
    let mut header = String::new();
    let _ = writeln!(header, "# photonic-ssp v{VERSION}");
    let _ = writeln!(header, "# config_hash={hash}");
    let _ = writeln!(header, "# seed={}", config.effective_seed());
    header
}

/// Echoes the reproducibility triple to stderr for commands whose files
/// cannot carry comments.
pub fn print_meta(config: &RunConfig, hash: &str) {
    eprintln!("# photonic-ssp v{VERSION}");
    eprintln!("# config_hash={hash}");
    eprintln!("# seed={}", config.effective_seed());
}

fn write_output(config: &RunConfig, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("creating {}", config.out_dir.display()))?;
    let path = config.out_dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Propagates under the configured parameters and applies noise when any is
/// configured.
fn light(config: &RunConfig, inst: &SspInstance) -> Result<(OpticalParams, IntensityDistribution)> {
    let params = config.optical_params()?;
    let network = build_network(inst);
    let mut dist = propagate(&network, &params, config.input_power)?;
    let noise = config.noise_model();
    if noise.noise_floor > 0.0 || noise.photon_budget.is_some() {
        dist = apply_noise(&dist, &noise)?;
    }
    Ok((params, dist))
}

/// `decide`: answer the instance's target by threshold read-out.
pub fn decide(config: &RunConfig, inst: &SspInstance) -> Result<i32> {
    let Some(target) = inst.target() else {
        bail!("decide needs a target; pass --target or set one in the instance");
    };
    let (params, dist) = light(config, inst)?;
    let table = SubsetCountTable::build(inst)?;
    let band = tolerance_band(&dist, &table);
    let threshold = config
        .threshold
        .or_else(|| band.midpoint())
        .unwrap_or(f64::MIN_POSITIVE);
    let report = classify(&dist, threshold, inst)?;

    let oracle_answer = photonic_ssp::decide(inst)?;
    let agreed = matches!(
        (report.answer, oracle_answer),
        (Answer::Yes, true) | (Answer::No, false)
    );
    println!("answer: {}", answer_str(report.answer));
    println!("target: {target}  intensity: {}  threshold: {threshold}", dist.port(target));
    println!(
        "band: lower={} upper={} valid={}",
        report.band.lower, report.band.upper, report.band.valid
    );
    println!("oracle: {}  agreement: {}", if oracle_answer { "yes" } else { "no" }, agreed);
    if report.mismatches.is_empty() {
        println!("mismatches: none");
    } else {
        println!("mismatches: {:?}", report.mismatches);
    }

    // Guarantee, not a hope: ideal light never contradicts the counting
    // oracle when the threshold came from the band and sampling is off.
    if params == OpticalParams::lossless()
        && inst.size() <= 20
        && config.noise.photon_budget.is_none()
        && config.threshold.is_none()
    {
        assert!(agreed, "lossless read-out contradicted the oracle on {inst:?}");
        assert!(report.mismatches.is_empty(), "lossless mismatches on {inst:?}");
    }

    let path = write_output(config, "report.json", &format!("{}\n", report.to_json()))?;
    println!("report: {}", path.display());
    Ok(match report.answer {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Indeterminate => 2,
    })
}

fn answer_str(answer: Answer) -> &'static str {
    match answer {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Indeterminate => "indeterminate",
    }
}

/// `simulate`: write the full per-column intensity read-out as CSV.
pub fn simulate(config: &RunConfig, hash: &str, inst: &SspInstance) -> Result<i32> {
    let (_, dist) = light(config, inst)?;
    let table = SubsetCountTable::build(inst)?;
    let band = tolerance_band(&dist, &table);

    let mut csv = csv_header(config, hash);
    let _ = writeln!(csv, "port,intensity,category");
    for column in 0..=inst.total() {
        let category = if table.is_achievable(column) { "present" } else { "absent" };
        let _ = writeln!(csv, "{column},{},{category}", dist.port(column));
    }
    for (name, amount) in dist.ledger.entries() {
        let _ = writeln!(csv, "# ledger {name}={amount}");
    }
    let _ = writeln!(csv, "# ledger total={}", dist.ledger.total());
    let _ = writeln!(csv, "# band lower={} upper={} valid={}", band.lower, band.upper, band.valid);

    let path = write_output(config, "distribution.csv", &csv)?;
    println!("distribution: {}", path.display());
    println!("band: lower={} upper={} valid={}", band.lower, band.upper, band.valid);
    Ok(0)
}

/// `race`: time every platform over successive primes and report crossovers.
pub fn race(config: &RunConfig, hash: &str) -> Result<i32> {
    let [n_min, n_max] = config.n_range;
    if n_min == 0 || n_min > n_max {
        bail!("n_range [{n_min}, {n_max}] is empty; need 1 <= min <= max");
    }
    let model = config.race_model();

    let mut csv = csv_header(config, hash);
    let _ = writeln!(csv, "N,photonic_s,molecular_s,cpu_s,gpu_s,super_s");
    for n in n_min..=n_max {
        let row = model.row(n)?;
        let _ = writeln!(
            csv,
            "{n},{:e},{:e},{:e},{:e},{:e}",
            row.photonic_s, row.molecular_s, row.cpu_s, row.gpu_s, row.super_s
        );
    }
    for (name, platform) in [
        ("cpu", &model.cpu),
        ("gpu", &model.gpu),
        ("supercomputer", &model.supercomputer),
    ] {
        match model.crossover_size(platform, 64) {
            Ok(n) => {
                let _ = writeln!(csv, "# crossover {name}={n}");
            }
            Err(Error::NoCrossover { cap }) => {
                let _ = writeln!(csv, "# crossover {name}=none within {cap}");
            }
            Err(e) => return Err(e.into()),
        }
    }

    let path = write_output(config, "race.csv", &csv)?;
    println!("race: {}", path.display());
    Ok(0)
}

/// `analyze`: SNR, detection probability, and estimator bounds per size.
pub fn analyze(config: &RunConfig, hash: &str) -> Result<i32> {
    let [n_min, n_max] = config.n_range;
    if n_min == 0 || n_min > n_max {
        bail!("n_range [{n_min}, {n_max}] is empty; need 1 <= min <= max");
    }
    let model: SnrModel = config.snr;

    let mut csv = csv_header(config, hash);
    let _ = writeln!(csv, "N,S,snr_db,theta,theta_flag,fisher_info,variance_bound");
    for n in n_min..=n_max {
        let s = sum_of_first_primes(n);
        let snr = model.snr_db(n)?;
        match model.theta(n) {
            Ok(theta) => {
                let fisher = FisherModel { theta, trials: config.trials };
                let _ = writeln!(
                    csv,
                    "{n},{s},{snr},{theta},ok,{},{}",
                    fisher.information()?,
                    fisher.variance_bound()?
                );
            }
            Err(Error::ThetaOutOfRange { value }) => {
                let _ = writeln!(csv, "{n},{s},{snr},{value},out_of_range,,");
            }
            Err(e) => return Err(e.into()),
        }
    }

    let path = write_output(config, "analysis.csv", &csv)?;
    println!("analysis: {}", path.display());
    Ok(0)
}

/// `export-network`: write the junction network as JSON.
pub fn export_network(config: &RunConfig, inst: &SspInstance) -> Result<i32> {
    let network = build_network(inst);
    let stats = network.stats();
    let path = write_output(config, "network.json", &format!("{}\n", network.export().to_json()))?;
    println!("network: {}", path.display());
    println!(
        "splits={} passes={} converges={} ports={} depth={}",
        stats.n_split, stats.n_pass, stats.n_converge, stats.n_ports, stats.depth
    );
    Ok(0)
}

/// `stats`: junction counts and depth, as JSON on stdout and on disk.
pub fn stats(config: &RunConfig, inst: &SspInstance) -> Result<i32> {
    let network = build_network(inst);
    let stats = network.stats();
    let json = serde_json::to_string_pretty(&stats).context("serializing stats")?;
    println!("{json}");
    write_output(config, "stats.json", &format!("{json}\n"))?;
    Ok(0)
}
