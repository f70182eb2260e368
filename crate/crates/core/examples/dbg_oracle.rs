use ensprune::prune::{PruneSession, SolverChoice};
use ensprune::dataset::Dataset;
use ensprune::forest::{Ensemble, Tree, TreeNode};
use ensprune::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leaf() -> TreeNode { TreeNode { feature: None, threshold: None, children: vec![], class_counts: vec![0,0], pred: 0, err: 0 } }
fn split(f: usize, tau: f64, ch: Vec<usize>) -> TreeNode { TreeNode { feature: Some(f), threshold: Some(tau), children: ch, class_counts: vec![0,0], pred: 0, err: 0 } }

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 120;
    let mut x = Vec::new(); let mut y = Vec::new();
    for _ in 0..n {
        let x0: f64 = rng.gen_range(0.0..1.0);
        let truth = x0 > 0.5;
        let label = if rng.gen_bool(0.93) { truth } else { !truth };
        let mut corr = |p: f64| if rng.gen_bool(if label {p} else {1.0-p}) { rng.gen_range(0.5..1.0) } else { rng.gen_range(0.0..0.5) };
        let x1 = corr(0.70); let x2 = corr(0.60);
        x.extend([x0, x1, x2]); y.push(label as usize);
    }
    let train = Dataset::from_parts(x, 3, y, 2).unwrap();
    let t1 = Tree::new(vec![split(0,0.5,vec![1,4]), split(1,0.5,vec![2,3]), leaf(), leaf(), split(1,0.5,vec![5,6]), leaf(), leaf()]).unwrap();
    let t2 = Tree::new(vec![split(1,0.5,vec![1,4]), split(0,0.5,vec![2,3]), leaf(), leaf(), split(0,0.5,vec![5,6]), leaf(), leaf()]).unwrap();
    let t3 = Tree::new(vec![split(0,0.5,vec![1,4]), split(2,0.5,vec![2,3]), leaf(), leaf(), split(2,0.5,vec![5,6]), leaf(), leaf()]).unwrap();
    let ens = Ensemble::new(vec![t1, t2, t3], vec![6.0, 1.0, 1.0], 2).unwrap();

    let mut session = PruneSession::new(&ens, &train).unwrap();
    for &lambda in &[0.005, 0.02, 0.05] {
        let oracle_opt = oracle::brute_force_optimum(&ens, &train, lambda).unwrap();
        for solver in [SolverChoice::Direct, SolverChoice::Dw] {
            let (pruned, pt) = session.prune_with_lambda(lambda, solver).unwrap();
            println!("lambda {lambda} {solver:?}: obj {:.6} cost {:.3} | oracle obj {:.6} cost {:.3} leafs {:?}",
                pt.objective, pt.train_cost, oracle_opt.objective, oracle_opt.cost_term, oracle_opt.leaf_sets);
            println!("   solver leaf sets {:?}", pruned.leaf_sets);
        }
    }
}
