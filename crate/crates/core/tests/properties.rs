use proptest::prelude::*;

use revzimin::lemmas::{self, WitnessConfig};
use revzimin::oracle::{self, OracleBudget};
use revzimin::zimin;
use revzimin::{decide, DecideConfig, FormulaR, PatternR, SearchBudget, Status, Sym, Variable};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn formula_strategy() -> impl Strategy<Value = FormulaR> {
    let frag = proptest::collection::vec((0..NAMES.len(), any::<bool>()), 1..=5);
    proptest::collection::vec(frag, 1..=2).prop_map(|frags| {
        FormulaR::new(frags.into_iter().map(|syms| {
            PatternR::new(syms.into_iter().map(|(v, m)| Sym::new(Variable::new(NAMES[v]).unwrap(), m)).collect())
                .unwrap()
        }))
    })
}

fn mirror_var(phi: &FormulaR, name: &str) -> FormulaR {
    phi.map_syms(|s| if s.var.name() == name { s.mirror() } else { s.clone() })
}

fn rename(phi: &FormulaR, perm: [usize; 3]) -> FormulaR {
    phi.map_syms(|s| {
        let i = NAMES.iter().position(|n| *n == s.var.name()).unwrap();
        Sym::new(Variable::new(NAMES[perm[i]]).unwrap(), s.mirrored)
    })
}

fn reverse_all(phi: &FormulaR) -> FormulaR {
    FormulaR::new(phi.fragments().iter().map(PatternR::d_reverse))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn status_invariant_under_symmetries(phi in formula_strategy(), perm in Just([0usize, 1, 2]).prop_shuffle(), v in 0..3usize) {
        let cfg = DecideConfig::fast();
        let base = decide(&phi, &cfg).status;
        prop_assert_eq!(decide(&rename(&phi, perm), &cfg).status, base);
        prop_assert_eq!(decide(&mirror_var(&phi, NAMES[v]), &cfg).status, base);
        prop_assert_eq!(decide(&reverse_all(&phi), &cfg).status, base);
        prop_assert_eq!(decide(&phi.normalize(), &cfg).status, base);
    }

    #[test]
    fn at_most_two_one_way_variables_are_decided(phi in formula_strategy()) {
        let v = decide(&phi, &DecideConfig::fast());
        prop_assume!(v.n <= 2);
        prop_assert_ne!(v.status, Status::Unknown, "{} {}", phi, v.certificate.kind());
    }

    #[test]
    fn certificates_check(phi in formula_strategy()) {
        let cfg = DecideConfig::fast();
        let v = decide(&phi, &cfg);
        prop_assert!(v.certificate.check(&phi, &cfg.witness), "{} {:?}", phi, v.certificate);
    }

    #[test]
    fn lemmas_never_contradict_division(phi in formula_strategy()) {
        let budget = SearchBudget::default();
        let psi = phi.normalize();
        let (m, n) = psi.way_counts();
        if lemmas::battery(&psi, &budget, &WitnessConfig::default()).is_some() {
            prop_assert!(!zimin::divides_zimin(&psi, m, n, &budget).unwrap().is_found());
        }
    }

    #[test]
    fn unavoidable_verdicts_meet_every_long_binary_word(phi in formula_strategy()) {
        let v = decide(&phi, &DecideConfig::fast());
        if v.status == Status::Unavoidable {
            let len = zimin::sufficient_length(v.m, v.n, 2).unwrap();
            if let Some(len) = u32::try_from(len).ok().filter(|&l| l <= 12) {
                prop_assert!(oracle::all_words_encounter(&phi, 2, len as usize).unwrap());
            }
        }
    }

    #[test]
    fn avoidable_verdicts_have_long_avoiders(phi in formula_strategy()) {
        let v = decide(&phi, &DecideConfig::fast());
        if v.status == Status::Avoidable {
            let found = (1..=5).any(|k| {
                oracle::search_avoiding_word(&phi, k, 50, &OracleBudget::nodes(50_000)).unwrap().word().is_some()
            });
            prop_assert!(found, "{}", phi);
        }
    }
}
