use ensprune::prune::{evaluate, PruneSession, SolverChoice};
use ensprune::dataset::Dataset;
use ensprune::forest::{Ensemble, Tree, TreeNode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leaf() -> TreeNode { TreeNode { feature: None, threshold: None, children: vec![], class_counts: vec![0,0], pred: 0, err: 0 } }
fn split(f: usize, tau: f64, ch: Vec<usize>) -> TreeNode { TreeNode { feature: Some(f), threshold: Some(tau), children: ch, class_counts: vec![0,0], pred: 0, err: 0 } }

fn instance(seed: u64) -> (Ensemble, Dataset, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x5DEECE66D).wrapping_add(11));
    let n = 120; let k = 3;
    let mut make = |n: usize| {
        let mut x = Vec::new(); let mut y = Vec::new();
        for _ in 0..n {
            let x0: f64 = rng.gen_range(0.0..1.0);
            let truth = x0 > 0.5;
            let label = if rng.gen_bool(0.92) { truth } else { !truth };
            let mut corr = |p: f64| if rng.gen_bool(if label {p} else {1.0-p}) { rng.gen_range(0.5..1.0) } else { rng.gen_range(0.0..0.5) };
            let x1 = corr(0.72); let x2 = corr(0.70);
            x.extend([x0, x1, x2]); y.push(label as usize);
        }
        Dataset::from_parts(x, k, y, 2).unwrap()
    };
    let train = make(n); let test = make(3 * n);
    let t1 = Tree::new(vec![split(0, 0.5, vec![1,2]), leaf(), leaf()]).unwrap();
    let deep = |froot: usize| Tree::new(vec![
        split(froot, 0.5, vec![1, 4]),
        split(0, 0.5, vec![2, 3]), leaf(), leaf(),
        split(0, 0.5, vec![5, 6]), leaf(), leaf(),
    ]).unwrap();
    let ens = Ensemble::new(vec![t1, deep(1), deep(2)], vec![6.0, 0.4, 0.4], 2).unwrap();
    (ens, train, test)
}

fn main() {
    let lambdas: Vec<f64> = (0..16).map(|i| 0.0008 * 1.75f64.powi(i)).collect();
    let (mut wins, mut ties, mut losses) = (0, 0, 0);
    for seed in 0..20u64 {
        let (ens, train, test) = instance(seed);
        let mut session = PruneSession::new(&ens, &train).unwrap();
        let mut ind_pts: Vec<(f64, f64, f64)> = Vec::new(); // (train_cost, test_cost, test_err)
        for &l in &lambdas {
            let ind = session.prune_individual(l).unwrap();
            let m = evaluate(&ind, &test).unwrap();
            ind_pts.push((ind.cost_term, m.avg_cost, m.error));
        }
        let mut ens_pts: Vec<(f64, f64)> = Vec::new(); // (test_cost, test_err)
        for &l in &lambdas {
            let (pe, _) = session.prune_with_lambda(l, SolverChoice::Direct).unwrap();
            let m = evaluate(&pe, &test).unwrap();
            ens_pts.push((m.avg_cost, m.error));
        }
        // Budget-mode points at each individual realized train cost.
        let mut budgets: Vec<f64> = ind_pts.iter().map(|p| p.0).collect();
        budgets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        budgets.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        for &b in &budgets {
            let out = session.prune_with_budget(b, SolverChoice::Direct).unwrap();
            let m = evaluate(&out.pruned, &test).unwrap();
            ens_pts.push((m.avg_cost, m.error));
        }
        let ind_xy: Vec<(f64, f64)> = ind_pts.iter().map(|p| (p.1, p.2)).collect();
        let emin = ens_pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let emax = ens_pts.iter().map(|p| p.1).fold(0.0f64, f64::max);
        let min_cost_at = |pts: &[(f64,f64)], e: f64| pts.iter().filter(|p| p.1 <= e + 1e-12).map(|p| p.0).fold(f64::INFINITY, f64::min);
        let (mut w, mut l) = (0, 0);
        for i in 1..=5 {
            let level = emin + (i as f64 / 6.0) * (emax - emin);
            let (ec, ic) = (min_cost_at(&ens_pts, level), min_cost_at(&ind_xy, level));
            if ec < ic - 1e-9 { w += 1; } else if ec > ic + 1e-9 { l += 1; }
        }
        let v = if w > l { wins += 1; "WIN" } else if w == l { ties += 1; "tie" } else { losses += 1; "LOSS" };
        println!("seed {seed:2}: won {w} lost {l} {v}");
    }
    println!("wins {wins} ties {ties} losses {losses}");
}
