//! Round-trip and symmetry invariants over the public API.

use std::sync::OnceLock;

use kacmoody::affine::{AffineAlgebra, AffineBasis, AffineElement, ElementRow};
use kacmoody::contraction::{contract, kappa_plain, ContractedAlgebra};
use kacmoody::grading::{relevance_mask, Grading, Group, RelevanceMode};
use kacmoody::lie::AlgebraSpec;
use kacmoody::rational::fmt_q;
use kacmoody::solve::{parse_q, solve_epsilon, EpsilonTable};
use kacmoody::weights::{weight_system, AffineWeight, WeightSystem};
use kacmoody::Q;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

const CASES: u32 = 10_000;

fn config(seed: u64) -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn affine(name: &str) -> AffineAlgebra {
    AffineAlgebra::new(AlgebraSpec::from_name(name).unwrap().build().unwrap())
}

fn algebras() -> &'static [AffineAlgebra] {
    static A: OnceLock<Vec<AffineAlgebra>> = OnceLock::new();
    A.get_or_init(|| ["A1", "A2", "A3", "B2", "C3", "G2"].map(affine).to_vec())
}

/// Every ε solution of the [0,1,1] and vertical Z3 gradings of Â2, contracted.
fn contractions() -> &'static [ContractedAlgebra] {
    static C: OnceLock<Vec<ContractedAlgebra>> = OnceLock::new();
    C.get_or_init(|| {
        let a2 = affine("A2");
        let gradings = [
            Grading::horizontal(&a2.finite, &[0, 1, 1]).unwrap(),
            Grading::vertical(3).unwrap(),
        ];
        gradings
            .iter()
            .flat_map(|g| {
                let mask = relevance_mask(g, &a2, RelevanceMode::Full).unwrap();
                solve_epsilon(&mask)
                    .unwrap()
                    .into_iter()
                    .map(|e| contract(&a2, g, &e, kappa_plain(&e)).unwrap())
                    .collect::<Vec<_>>()
            })
            .collect()
    })
}

fn a2_basic() -> &'static WeightSystem {
    static W: OnceLock<WeightSystem> = OnceLock::new();
    W.get_or_init(|| weight_system(&affine("A2"), &[1, 0, 0], 8).unwrap())
}

fn basis_of(alg: &AffineAlgebra, pick: usize, m: i64) -> AffineBasis {
    let roots = alg.finite.roots.len();
    match pick % (roots + alg.rank() + 1) {
        k if k < roots => AffineBasis::Real { root: k, m },
        k if k < roots + alg.rank() => AffineBasis::Cartan { i: k - roots, m },
        _ => AffineBasis::Central,
    }
}

fn rational() -> impl Strategy<Value = Q> {
    (-1000i64..1000, 1i64..50).prop_map(|(n, d)| Q::new(n, d))
}

proptest! {
    #![proptest_config(config(0x01))]

    #[test]
    fn omega_labels_round_trip(alg in 0usize..6, n in prop::collection::vec(-20i64..20, 8)) {
        let a = &algebras()[alg];
        let coeffs = &n[..=a.rank()];
        let w = a.simple_to_omega(coeffs);
        prop_assert_eq!(a.omega_to_simple(&w).unwrap(), coeffs.to_vec());
        let root = a.from_simple_coeffs(coeffs);
        prop_assert_eq!(a.to_simple_coeffs(&root), coeffs.to_vec());
        prop_assert_eq!(a.from_omega(&a.to_omega(&root)).unwrap(), root);
    }
}

proptest! {
    #![proptest_config(config(0x02))]

    #[test]
    fn rationals_print_and_parse(x in rational()) {
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(config(0x03))]

    #[test]
    fn elements_survive_json(
        alg in 0usize..6,
        terms in prop::collection::vec((0usize..64, -4i64..=4, rational()), 0..6),
    ) {
        let a = &algebras()[alg];
        let mut x = AffineElement::zero(4);
        for (pick, m, c) in terms {
            x.add_scaled(c, &AffineElement::basis(basis_of(a, pick, m), 4).unwrap());
        }
        let rows: Vec<ElementRow> =
            serde_json::from_str(&serde_json::to_string(&x.to_json_rows(a)).unwrap()).unwrap();
        prop_assert_eq!(AffineElement::from_json_rows(a, &rows, 4).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(config(0x04))]

    /// `[x,y] = −[y,x]` and `[x,y] ∈ L_{μ+ν}` for contracted brackets.
    #[test]
    fn contracted_bracket_is_graded_and_antisymmetric(
        which in 0usize..64,
        px in 0usize..64, mx in -3i64..=3,
        py in 0usize..64, my in -3i64..=3,
    ) {
        let cs = contractions();
        let c = &cs[which % cs.len()];
        let (x, y) = (basis_of(&c.algebra, px, mx), basis_of(&c.algebra, py, my));
        let xy = c.bracket_basis(x, y, 6).unwrap();
        let mut yx = c.bracket_basis(y, x, 6).unwrap();
        for v in yx.values_mut() {
            *v = -*v;
        }
        prop_assert_eq!(&xy, &yx);
        let g = &c.grading.group;
        let target = g.add_idx(c.class_index(x), c.class_index(y));
        for z in xy.keys() {
            if *z != AffineBasis::Central {
                prop_assert_eq!(c.class_index(*z), target);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(0x05))]

    /// The diagram symmetry fixing node 0 swaps λ1 and λ2 and preserves multiplicities.
    #[test]
    fn basic_module_is_symmetric(depth in 0u32..=8, a in -8i64..=8, b in -8i64..=8) {
        let ws = a2_basic();
        let w = AffineWeight { depth, labels: vec![a, b] };
        let s = AffineWeight { depth, labels: vec![b, a] };
        prop_assert_eq!(ws.multiplicity(&w), ws.multiplicity(&s));
    }
}

proptest! {
    #![proptest_config(config(0x06))]

    #[test]
    fn group_labels_round_trip(moduli in prop::collection::vec(2u64..6, 1..4), i in 0usize..1000, j in 0usize..1000) {
        let name = moduli.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x");
        let g = Group::parse(&name).unwrap();
        let (i, j) = (i % g.order(), j % g.order());
        let (a, b) = (g.label(i), g.label(j));
        prop_assert_eq!(g.index(&a), i);
        prop_assert_eq!(g.parse_label(&g.fmt_label(&a)).unwrap(), a.clone());
        prop_assert_eq!(g.index(&g.add(&a, &b)), g.add_idx(i, j));
        prop_assert_eq!(g.add(&a, &g.neg(&a)), g.zero());
    }
}

#[test]
fn epsilon_tables_survive_json() {
    let z2z2 = Group::parse("Z2xZ2").unwrap();
    let mut mask = kacmoody::grading::Mask::all(&z2z2);
    mask.set_irrelevant(1, 2);
    for t in solve_epsilon(&mask).unwrap() {
        let back = EpsilonTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.compact(), t.compact());
    }
}
