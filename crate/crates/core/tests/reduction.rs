use std::fs;

use num_bigint::BigInt;

use kfib_pillai::algebraic::{dominant_root, ln2, log_interval, DyadicInterval};
use kfib_pillai::cache::RootCache;
use kfib_pillai::reduction::{
    cf_expand, dp_reduce, reduction_sweep, reduction_sweep_to_file, Case, Ladder, ReductionInstance, SweepSpec,
};
use kfib_pillai::Error;

#[test]
fn golden_instance_has_no_violation_up_to_a_million() {
    let p = 256;
    let root = dominant_root(2, p).unwrap();
    let tau = root.tau().unwrap();
    let mu = log_interval(&root.f_k().unwrap(), p).unwrap().div(&ln2(p), p).unwrap();
    let m = BigInt::from(1_000_000);
    let inst = ReductionInstance {
        tau: tau.clone(),
        mu: mu.clone(),
        a: DyadicInterval::from_int(8),
        b: DyadicInterval::from_int(2),
        m: m.clone(),
    };
    let cf = cf_expand(&tau, 1000).unwrap();
    let out = dp_reduce(&inst, &cf).unwrap();
    // a violation would be 0 < |u tau - v + mu| < 8 / 2^w with w > w_bound
    let t = DyadicInterval::from_int(8).mul_pow2(-(out.w_bound + 1));
    let mut x = mu;
    for u in 1..=1_000_000 {
        x = x.add(&tau, p);
        let d = x.dist_to_nearest_int(p).expect("no half-integer");
        assert!(!d.certainly_lt(&t), "violation at u = {u}");
    }
}

fn read(path: &std::path::Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn sweep_resumes_to_identical_output() {
    let spec = SweepSpec::new(Case::Gamma3, 4, 3, 3, &BigInt::from(1_000_000), 300);
    let dir = tempfile::tempdir().unwrap();
    let (full, full_cur) = (dir.path().join("full.jsonl"), dir.path().join("full.cursor"));
    let r_full = reduction_sweep_to_file(&spec, &full, &full_cur).unwrap();
    assert_eq!(r_full.failed, 0);
    assert_eq!(r_full, reduction_sweep(&spec).unwrap());

    // an interrupted run: four cells recorded, the fifth half written
    let (part, part_cur) = (dir.path().join("part.jsonl"), dir.path().join("part.cursor"));
    let full_text = read(&full);
    let lines: Vec<&str> = full_text.lines().collect();
    let per_cell = lines.len() / 9;
    let mut text = lines[..4 * per_cell].join("\n");
    text.push('\n');
    text.push_str(&lines[4 * per_cell][..10]);
    fs::write(&part, text).unwrap();
    fs::write(
        &part_cur,
        serde_json::json!({ "spec": spec, "completed": 4 }).to_string(),
    )
    .unwrap();
    let r_part = reduction_sweep_to_file(&spec, &part, &part_cur).unwrap();
    assert_eq!(read(&part), read(&full));
    assert_eq!(r_part, r_full);

    let other = SweepSpec { l_max: 2, ..spec };
    assert!(matches!(
        reduction_sweep_to_file(&other, &part, &part_cur),
        Err(Error::Cache(_))
    ));
}

#[test]
fn cached_ladder_reuses_root_and_checks_quotients() {
    let dir = tempfile::tempdir().unwrap();
    let cache = RootCache::new(dir.path());
    let m = BigInt::from(1_000_000);
    let first = Ladder::with_cache(4, m.clone(), 256, cache.clone());
    let cf_len = first.level(0).unwrap().cf.len();
    let stored = cache.load(4, 256).unwrap().unwrap();
    assert_eq!(stored.quotients.as_ref().map(Vec::len), Some(cf_len));
    assert!(cache.root(4, 256).unwrap().hit);

    let second = Ladder::with_cache(4, m.clone(), 256, cache.clone());
    assert_eq!(second.level(0).unwrap().root, first.level(0).unwrap().root);

    let path = cache.path(4, 256);
    let tampered: String = read(&path)
        .lines()
        .map(|l| match l.strip_prefix("cf ") {
            Some(q) => format!("cf 7 {}\n", q.split_once(' ').unwrap().1),
            None => format!("{l}\n"),
        })
        .collect();
    assert_ne!(tampered, read(&path));
    fs::write(&path, tampered).unwrap();
    let third = Ladder::with_cache(4, m, 256, cache);
    assert!(matches!(third.level(0), Err(Error::Cache(_))));
}
