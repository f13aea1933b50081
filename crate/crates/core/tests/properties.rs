use std::collections::BTreeSet;

use dlk_core::builder::{build, realize_spec_with, BuildParams, Fragment, Functional};
use dlk_core::logics::{instantiate, match_axiom, translate_t, Binding, LogicProfile};
use dlk_core::proofs::{derive_forward_with, ForwardParams};
use dlk_core::semantics::{audit, respects};
use dlk_core::specifications::{blue_pill, ConstantSpec, SpecBounds};
use dlk_core::syntax::{
    cmp_formulas, cmp_terms, enumerate_formulas, enumerate_terms, parse_formula, parse_term,
    print_formula, print_term, Formula, Sign, Signedness, Term,
};
use dlk_core::Execution;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn unsigned_term() -> impl Strategy<Value = Term> {
    let leaf = select(vec!["a", "b", "c", "x", "y"]).prop_map(|n| Term::leaf(n, Sign::Unsigned));
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner.clone(), inner, 0..3u8).prop_map(|(l, r, op)| match op {
            0 => Term::app(l, r),
            1 => Term::sum(l, r),
            _ => Term::pair(l, r),
        })
    })
}

/// Terms obeying the fused sign discipline.
fn signed_term(sign: Sign) -> BoxedStrategy<Term> {
    let leaf = select(vec!["c1", "c2", "d"]).prop_map(move |n| Term::leaf(n, sign));
    leaf.prop_recursive(3, 10, 2, move |inner| {
        let same = (inner.clone(), inner.clone(), any::<bool>())
            .prop_map(|(l, r, app)| if app { Term::app(l, r) } else { Term::sum(l, r) });
        match sign {
            Sign::Positive => prop_oneof![same, inner.prop_map(Term::bang)].boxed(),
            _ => prop_oneof![same, (inner.clone(), inner).prop_map(|(l, r)| Term::pair(l, r))].boxed(),
        }
    })
    .boxed()
}

fn any_signed_term() -> BoxedStrategy<Term> {
    prop_oneof![signed_term(Sign::Positive), signed_term(Sign::Negative)].boxed()
}

fn formula_over(terms: BoxedStrategy<Term>) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bottom),
        select(vec!["P", "Q", "R"]).prop_map(Formula::var),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (terms.clone(), inner).prop_map(|(t, b)| Formula::just(t, b)),
        ]
    })
    .boxed()
}

fn dl_formula() -> BoxedStrategy<Formula> {
    formula_over(unsigned_term().boxed())
}

fn fused_formula() -> BoxedStrategy<Formula> {
    formula_over(any_signed_term())
}

fn small_prop() -> BoxedStrategy<Formula> {
    select(vec!["P", "Q", "~P", "P -> Q", "P /\\ Q", "~~Q", "P \\/ ~Q"])
        .prop_map(|s| parse_formula(s, Signedness::Unsigned).unwrap())
        .boxed()
}

/// A DL specification with one or two entries over constants `e1`, `e2`.
fn dl_spec() -> impl Strategy<Value = ConstantSpec> {
    prop::collection::vec((select(vec!["e1", "e2"]), small_prop(), any::<bool>()), 1..=2).prop_map(
        |entries| {
            let raw: Vec<Formula> = entries
                .into_iter()
                .map(|(c, p, negated)| {
                    let j = Formula::just(Term::leaf(c, Sign::Unsigned), p);
                    if negated {
                        Formula::not(j)
                    } else {
                        j
                    }
                })
                .collect();
            ConstantSpec::close(&raw, LogicProfile::Dl).unwrap()
        },
    )
}

fn small_params() -> ForwardParams {
    let mut p = ForwardParams::new(2, 3);
    p.schema_budget = 512;
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip_unsigned(f in dl_formula()) {
        let printed = print_formula(&f);
        prop_assert_eq!(parse_formula(&printed, Signedness::Unsigned).unwrap(), f);
    }

    #[test]
    fn print_parse_round_trip_signed(f in fused_formula(), t in any_signed_term()) {
        let printed = print_formula(&f);
        prop_assert_eq!(parse_formula(&printed, Signedness::Signed).unwrap(), f.clone());
        prop_assert_eq!(parse_term(&print_term(&t), Signedness::Signed).unwrap(), t.clone());
        prop_assert!(LogicProfile::Fused.check_formula(&f).is_ok());
        prop_assert!(LogicProfile::Fused.check_term(&t).is_ok());
    }

    #[test]
    fn formula_order_is_total_and_size_first(a in dl_formula(), b in dl_formula()) {
        let ab = cmp_formulas(&a, &b);
        prop_assert_eq!(ab, cmp_formulas(&b, &a).reverse());
        prop_assert_eq!(ab.is_eq(), a == b);
        if a.size() < b.size() {
            prop_assert!(ab.is_lt());
        }
    }

    #[test]
    fn term_order_is_total_and_size_first(a in unsigned_term(), b in unsigned_term()) {
        let ab = cmp_terms(&a, &b);
        prop_assert_eq!(ab, cmp_terms(&b, &a).reverse());
        prop_assert_eq!(ab.is_eq(), a == b);
        if a.size() < b.size() {
            prop_assert!(ab.is_lt());
        }
    }

    #[test]
    fn instantiate_then_match_recovers_binding(
        schema in select(LogicProfile::Fused.schemas()),
        fs in prop::collection::vec(small_prop(), 4),
        ts in prop::collection::vec(any_signed_term(), 2),
    ) {
        let s = schema.schema();
        let mut binding = Binding::new();
        for (meta, f) in s.formula_metas.iter().zip(fs) {
            binding = binding.formula(meta, f);
        }
        for (meta, t) in s.term_metas.iter().zip(ts) {
            binding = binding.term(meta, t);
        }
        match instantiate(schema, &binding, LogicProfile::Fused) {
            Ok(inst) => {
                let found = match_axiom(&inst, LogicProfile::Fused);
                prop_assert!(found.contains(&(schema, binding)), "{} not recognised", inst);
            }
            // only the sign discipline may refuse a well-formed binding
            Err(e) => prop_assert!(e.to_string().contains("sign"), "{}", e),
        }
    }

    #[test]
    fn translation_is_injective_and_idempotent(a in fused_formula(), b in fused_formula()) {
        let (ta, tb) = (translate_t(&a), translate_t(&b));
        prop_assert!(!ta.has_negative_term());
        prop_assert_eq!(translate_t(&ta), ta.clone());
        prop_assert_eq!(a == b, ta == tb);
    }

    #[test]
    fn closure_is_idempotent_and_minimal(spec in dl_spec()) {
        let again = ConstantSpec::close(spec.formulas(), LogicProfile::Dl).unwrap();
        let set = |s: &ConstantSpec| s.formulas().iter().cloned().collect::<BTreeSet<_>>();
        prop_assert_eq!(set(&again), set(&spec));
        prop_assert!(ConstantSpec::is_closed_set(spec.formulas(), LogicProfile::Dl));
        for f in &spec.formulas()[spec.seeds().len()..] {
            let without: Vec<Formula> = spec.formulas().iter().filter(|g| *g != f).cloned().collect();
            prop_assert!(!ConstantSpec::is_closed_set(&without, LogicProfile::Dl), "{} is superfluous", f);
        }
    }

    #[test]
    fn builder_models_only_hold_false_formulas(
        p in any::<bool>(),
        q in any::<bool>(),
        preset in select(vec!["const-zero", "const-one", "plus-syntactic"]),
    ) {
        let params = BuildParams::new(LogicProfile::Dl, &["P", "Q"], 4, 3)
            .with_functional(Functional::preset(preset, None).unwrap())
            .set("P", p)
            .set("Q", q);
        let (m, trace) = build(&params).unwrap();
        prop_assert_eq!(trace.mismatches, 0);
        for set in m.interp.values() {
            for f in set {
                prop_assert!(!m.eval(f), "true member {}", f);
            }
        }
        let frag = Fragment::new(&params);
        prop_assert!(audit(&m, frag.terms.items()).is_clean());
        let (again, _) = build(&params).unwrap();
        prop_assert_eq!(&again, &m);
        let empty = ConstantSpec::empty(LogicProfile::Dl);
        let (seq, _) = realize_spec_with(&empty, &params, Execution::Sequential).unwrap();
        let (par, _) = realize_spec_with(&empty, &params, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn derived_formulas_hold_in_realized_models(spec in dl_spec()) {
        prop_assume!(spec.is_consistent_syntactically());
        let d = derive_forward_with(&spec, LogicProfile::Dl, None, &small_params());
        let params = BuildParams::new(LogicProfile::Dl, &[], 4, 3).with_leaves(&[]);
        let Ok((m, _)) = realize_spec_with(&spec, &params, Execution::default()) else {
            return Ok(());
        };
        prop_assert!(respects(&m, &spec));
        let terms: BTreeSet<Term> = m.interp.keys().cloned().collect();
        let mut checked = 0;
        for f in d.formulas() {
            let mut inside = true;
            f.for_each_term(&mut |t| inside &= terms.contains(t));
            if inside && f.size() <= 4 {
                prop_assert!(m.eval(f), "derived `{}` is false", f);
                checked += 1;
            }
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn derivation_grows_with_depth(spec in dl_spec()) {
        // budgets large enough that nothing is cut at size 3
        let full = ForwardParams { schema_budget: 1 << 20, ..small_params() };
        let shallow = derive_forward_with(&spec, LogicProfile::Dl, None, &ForwardParams { depth: 1, ..full.clone() });
        let deep = derive_forward_with(&spec, LogicProfile::Dl, None, &full);
        prop_assume!(!shallow.truncated() && !deep.truncated());
        for f in shallow.formulas() {
            prop_assert!(deep.contains(f), "`{}` lost at depth 2", f);
        }
    }

    #[test]
    fn blue_pill_models_satisfy_ok_subsets(spec in dl_spec(), pick in subsequence((0..64usize).collect::<Vec<_>>(), 0..=4)) {
        prop_assume!(spec.is_consistent_syntactically());
        let bounds = SpecBounds { depth: 2, size: 3, ..SpecBounds::default() };
        let bp = blue_pill(&spec, &bounds);
        let w = match bp.result {
            Ok(w) => w,
            Err(e) => return Err(TestCaseError::fail(format!("no JL model: {e}"))),
        };
        let members: Vec<&Formula> = bp.ok.members().collect();
        for f in &members {
            prop_assert!(w.model.eval(f), "OK member `{}` is false", f);
        }
        let chosen: Vec<Formula> = pick.iter().filter_map(|i| members.get(*i).copied().cloned()).collect();
        if let Some(conj) = chosen.iter().cloned().reduce(Formula::and) {
            prop_assert!(w.model.eval(&conj));
        }
        prop_assert!(w.audit.is_clean());
    }
}

/// Independent count of DL terms by size over `n` leaves.
fn count_terms(n: usize, size: usize) -> usize {
    match size {
        0 => 0,
        1 => n,
        2 => 0,
        s => (1..s - 1).map(|i| 3 * count_terms(n, i) * count_terms(n, s - 1 - i)).sum(),
    }
}

fn count_formulas(vars: usize, terms: &[usize], size: usize) -> usize {
    match size {
        0 => 0,
        1 => vars + 1,
        s => {
            let mut total = count_formulas(vars, terms, s - 1);
            for i in 1..s - 1 {
                let right = count_formulas(vars, terms, s - 1 - i);
                total += 3 * count_formulas(vars, terms, i) * right;
                total += terms.get(i).copied().unwrap_or(0) * right;
            }
            total
        }
    }
}

#[test]
fn term_enumeration_matches_counting_recurrence() {
    let leaves = [Term::leaf("x", Sign::Unsigned), Term::leaf("c", Sign::Unsigned)];
    for bound in 1..=5 {
        let e = enumerate_terms(LogicProfile::Dl.operators(), &leaves, bound);
        let expected: usize = (1..=bound).map(|s| count_terms(2, s)).sum();
        assert_eq!(e.len(), expected, "bound {bound}");
    }
    assert_eq!(enumerate_terms(LogicProfile::Dl.operators(), &leaves, 3).len(), 14);
}

#[test]
fn formula_enumeration_matches_counting_recurrence() {
    let leaves = [Term::leaf("x", Sign::Unsigned), Term::leaf("y", Sign::Unsigned)];
    let terms = enumerate_terms(LogicProfile::Dl.operators(), &leaves, 3);
    let by_size: Vec<usize> = (0..=5).map(|s| count_terms(2, s)).collect();
    let e = enumerate_formulas(&["P".into(), "Q".into()], terms.items(), 5);
    let expected: usize = (1..=5).map(|s| count_formulas(2, &by_size, s)).sum();
    assert_eq!(e.len(), expected);
    for (i, f) in e.items().iter().enumerate() {
        for child in f.children() {
            assert!(e.index_of(child).unwrap() < i, "`{child}` after `{f}`");
        }
        if i > 0 {
            assert!(cmp_formulas(&e.items()[i - 1], f).is_lt());
        }
    }
}
