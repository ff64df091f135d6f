use majlab_core::exact::{q, Q};
use majlab_core::identities::coloring_from_code;
use majlab_core::oracle::{is_exact_one, is_exact_zero, oracle_eval, Oracle, OracleP, OracleQuery, SetKind, Statistic};
use majlab_core::{parse_colors, Color, UpdateRule};
use num_traits::One;

fn win(color: Color) -> Statistic {
    Statistic::WinProb {
        color,
        rule: UpdateRule::Standard,
        cap: None,
    }
}

#[test]
fn weights_sum_to_one() {
    for n in 1..=6 {
        let oracle = Oracle::new(n, vec![Color::One; n]).unwrap();
        for p in [q(1, 2), q(2, 7), q(9, 10)] {
            assert!(oracle.total_weight(&p).is_one(), "n = {n}, p = {p}");
        }
    }
}

#[test]
fn strict_majority_wins_on_the_complete_graph() {
    for n in 1..=6 {
        for code in 0..1u64 << n {
            let colors = coloring_from_code(n, code);
            let c1 = colors.iter().filter(|&&c| c == Color::One).count();
            let c2 = n - c1;
            if c1 == c2 {
                continue;
            }
            let majority = if c1 > c2 { Color::One } else { Color::Two };
            let oracle = Oracle::new(n, colors).unwrap();
            let a = oracle.eval(&OracleP::Exact(q(1, 1)), &win(majority)).unwrap();
            assert!(is_exact_one(&a), "n = {n}, colors = {code:b}: {a:?}");
        }
    }
}

/// Hand enumeration of the 8 graphs on three vertices: color 1 wins on
/// the two 2-edge graphs containing edge 01 and on the triangle.
#[test]
fn three_vertex_win_probability() {
    for (p, expect) in [(q(1, 2), "3/8"), (q(1, 3), "5/27")] {
        let a = oracle_eval(&OracleQuery {
            n: 3,
            p: OracleP::Exact(p),
            colors: parse_colors("112").unwrap(),
            statistic: win(Color::One),
        })
        .unwrap();
        assert_eq!(a.exact.as_deref(), Some(expect));
    }
}

#[test]
fn centered_sum_has_exact_mean_zero() {
    for n in 2..=5 {
        for code in 1..(1u64 << n) - 1 {
            let oracle = Oracle::new(n, coloring_from_code(n, code)).unwrap();
            for rule in [UpdateRule::Standard, UpdateRule::Biased] {
                let a = oracle
                    .eval(&OracleP::Exact(q(3, 8)), &Statistic::MomentZ { k: 1, rule })
                    .unwrap();
                assert!(is_exact_zero(&a), "n = {n}, colors = {code:b}, {rule:?}: {a:?}");
            }
        }
    }
}

#[test]
fn double_neighbors_average_p_squared_of_s_star() {
    let p = q(2, 5);
    for n in 3..=6 {
        for code in 0..1u64 << n {
            let colors = coloring_from_code(n, code);
            if colors.iter().filter(|&&c| c == Color::One).count() < 2 {
                continue;
            }
            let oracle = Oracle::new(n, colors).unwrap();
            let stat = |which| Statistic::SetStat {
                which,
                moment: 1,
                focal: None,
                w: None,
            };
            let ig = oracle.eval(&OracleP::Exact(p.clone()), &stat(SetKind::IG)).unwrap();
            let star = oracle.eval(&OracleP::Exact(p.clone()), &stat(SetKind::SStar)).unwrap();
            let parse = |s: &Option<String>| majlab_core::exact::parse_rational(s.as_deref().unwrap()).unwrap();
            let lhs: Q = parse(&ig.exact);
            let rhs: Q = &p * &p * parse(&star.exact);
            assert_eq!(lhs, rhs, "n = {n}, colors = {code:b}");
        }
    }
}
