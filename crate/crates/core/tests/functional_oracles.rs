use intconj::corpus::{duality_case, optimal_pair, rng, support_case};
use intconj::functionals::{
    brute_force_primal, check_sd, duality_gap, eval_ih, eval_j, primal_blocks, primal_conjugate, primal_conjugate_on,
    sigma_cs,
};
use intconj::lp::{LinearProgram, LpOutcome};
use intconj::{ExtReal, SignedMeasure};

/// Stacks independent programs into one block-diagonal program.
fn monolithic(blocks: &[LinearProgram]) -> LinearProgram {
    let n: usize = blocks.iter().map(|b| b.objective.len()).sum();
    let mut lp = LinearProgram::new(n);
    let mut off = 0;
    for b in blocks {
        for j in 0..b.objective.len() {
            lp.objective[off + j] = b.objective[j];
            lp.lower[off + j] = b.lower[j];
            lp.upper[off + j] = b.upper[j];
        }
        for c in &b.constraints {
            lp.add(c.coeffs.iter().map(|&(j, a)| (off + j, a)).collect(), c.relation, c.rhs);
        }
        off += b.objective.len();
    }
    lp
}

#[test]
fn block_solution_matches_monolithic_program() {
    let mut r = rng(41);
    for _ in 0..30 {
        let c = duality_case(&mut r);
        let rf = c.h.complex().refine_uniform(8).unwrap();
        let (h, th, mu) = (c.h.refine(&rf), c.theta.refine(&rf), c.mu.refine(&rf));
        let blocks = primal_blocks(&h, &th, &mu).unwrap();
        let whole = match monolithic(&blocks).solve() {
            LpOutcome::Optimal { value, .. } => value,
            o => panic!("{o:?}"),
        };
        let split = primal_conjugate_on(&h, &th, &mu).unwrap().finite().unwrap();
        assert!((whole - split).abs() < 1e-8, "{whole} vs {split}");
    }
}

#[test]
fn lp_matches_exhaustive_search() {
    let mut r = rng(42);
    let mut tested = 0;
    while tested < 10 {
        let c = duality_case(&mut r);
        if c.h.complex().num_nodes() > 4 {
            continue;
        }
        tested += 1;
        let lp = primal_conjugate_on(&c.h, &c.theta, &c.mu).unwrap().finite().unwrap();
        let brute = brute_force_primal(&c.h, &c.theta, &c.mu, 0.0, 1.2, 41).unwrap();
        // Grid spacing 0.03, slopes and densities below 1.5.
        assert!(brute <= lp + 1e-9 && lp - brute < 0.05, "{brute} vs {lp}");
    }
}

#[test]
fn regular_cases_close_the_gap() {
    let mut r = rng(43);
    for _ in 0..5 {
        let c = duality_case(&mut r);
        let rep = duality_gap(&c.h, &c.theta, &c.mu, &[64, 512, 4096]).unwrap();
        assert!(rep.monotone && rep.bounded_by_j);
        assert!(rep.levels.last().unwrap().gap.unwrap() <= 1e-3, "{rep:?}");
    }
}

#[test]
fn support_lp_below_formula() {
    let mut r = rng(44);
    for _ in 0..30 {
        let c = support_case(&mut r);
        let coarse = sigma_cs(&c.map, &c.theta, &c.mu, 64).unwrap();
        let fine = sigma_cs(&c.map, &c.theta, &c.mu, 4096).unwrap();
        let (g0, g1) = (coarse.gap().unwrap(), fine.gap().unwrap());
        assert!(g1 >= -1e-9 && g1 <= 1e-3, "{g1}");
        assert!(g1 <= g0 + 1e-12);
    }
}

#[test]
fn atom_terms_match_recession_sampling() {
    let mut r = rng(45);
    for _ in 0..30 {
        let c = duality_case(&mut r);
        let cx = c.h.complex().clone();
        let zero = SignedMeasure::new(cx.clone(), vec![0.0; cx.num_cells()], vec![]).unwrap();
        let base = eval_j(&c.h, &zero, &c.mu).unwrap().finite().unwrap();
        for k in 0..cx.num_nodes() {
            for w in [-0.7, 0.4] {
                let th = SignedMeasure::new(cx.clone(), vec![0.0; cx.num_cells()], vec![(k, w)]).unwrap();
                let got = eval_j(&c.h, &th, &c.mu).unwrap().finite().unwrap() - base;
                let g = c.h.nodes()[k].as_ref().unwrap().conjugate();
                let a = 1e6;
                let sampled = (g.eval(2.0 * a * w).finite().unwrap() - g.eval(a * w).finite().unwrap()) / a;
                assert!((got - sampled).abs() < 1e-9, "{got} vs {sampled}");
            }
        }
    }
}

#[test]
fn optimal_pairs_satisfy_fenchel_equality() {
    let mut r = rng(46);
    for _ in 0..20 {
        let p = optimal_pair(&mut r);
        let rep = check_sd(&p.h, &p.y, &p.theta, &p.mu).unwrap();
        assert!(rep.pointwise, "{rep:?}");
        let lhs = eval_ih(&p.h, &p.y, &p.mu).unwrap().finite().unwrap() + eval_j(&p.h, &p.theta, &p.mu).unwrap().finite().unwrap();
        let pair = p.theta.pair(&p.y, &p.mu).unwrap();
        assert!((lhs - pair).abs() < 1e-9);
        // The primal value is attained at y, so refinement cannot exceed J.
        let primal = primal_conjugate(&p.h, &p.theta, &p.mu, 64).unwrap();
        assert!(primal.approx_eq(ExtReal::Finite(pair - eval_ih(&p.h, &p.y, &p.mu).unwrap().finite().unwrap()), 1e-9));
    }
}
