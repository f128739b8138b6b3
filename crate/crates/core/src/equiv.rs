//! Decision procedures for effect equivalence (the idempotent commutative
//! monoid laws with `pure` as unit) and type equivalence (alpha-equivalence
//! that compares arrow effects modulo those laws).

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Effect, Ident, Type};

/// Normal form of an effect: the set of identifiers joined together.
/// `pure` is the empty set, join is union, a variable is a singleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectNF {
    pub atoms: BTreeSet<Ident>,
}

pub fn effect_normalize(e: &Effect) -> EffectNF {
    let mut atoms = BTreeSet::new();
    collect_atoms(e, &mut atoms);
    EffectNF { atoms }
}

fn collect_atoms(e: &Effect, atoms: &mut BTreeSet<Ident>) {
    match e {
        Effect::Var(i) => {
            atoms.insert(i.clone());
        }
        Effect::Pure => {}
        Effect::Join(l, r) => {
            collect_atoms(l, atoms);
            collect_atoms(r, atoms);
        }
    }
}

pub fn effect_equiv(e1: &Effect, e2: &Effect) -> bool {
    effect_normalize(e1) == effect_normalize(e2)
}

/// An atom as seen through the binder pairing: either the de Bruijn level of
/// the enclosing quantifier pair, or a free identifier.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Atom<'a> {
    Bound(usize),
    Free(&'a Ident),
}

fn atom<'a>(i: &'a Ident, m: &BTreeMap<&'a Ident, usize>) -> Atom<'a> {
    match m.get(i) {
        Some(level) => Atom::Bound(*level),
        None => Atom::Free(i),
    }
}

fn eff_atoms<'a>(e: &'a Effect, m: &BTreeMap<&'a Ident, usize>) -> BTreeSet<Atom<'a>> {
    let mut out = BTreeSet::new();
    collect_atom_refs(e, m, &mut out);
    out
}

fn collect_atom_refs<'a>(e: &'a Effect, m: &BTreeMap<&'a Ident, usize>, out: &mut BTreeSet<Atom<'a>>) {
    match e {
        Effect::Var(i) => {
            out.insert(atom(i, m));
        }
        Effect::Pure => {}
        Effect::Join(l, r) => {
            collect_atom_refs(l, m, out);
            collect_atom_refs(r, m, out);
        }
    }
}

fn ty_eq<'a>(
    t1: &'a Type,
    t2: &'a Type,
    m1: &mut BTreeMap<&'a Ident, usize>,
    m2: &mut BTreeMap<&'a Ident, usize>,
    depth: usize,
) -> bool {
    match (t1, t2) {
        (Type::Var(a), Type::Var(b)) => atom(a, m1) == atom(b, m2),
        (Type::Arrow(a1, e1, r1), Type::Arrow(a2, e2, r2)) => {
            ty_eq(a1, a2, m1, m2, depth)
                && eff_atoms(e1, m1) == eff_atoms(e2, m2)
                && ty_eq(r1, r2, m1, m2, depth)
        }
        (Type::Forall(b1, k1, body1), Type::Forall(b2, k2, body2)) => {
            if k1 != k2 {
                return false;
            }
            let old1 = m1.insert(b1, depth);
            let old2 = m2.insert(b2, depth);
            let ok = ty_eq(body1, body2, m1, m2, depth + 1);
            match old1 {
                Some(v) => {
                    m1.insert(b1, v);
                }
                None => {
                    m1.remove(b1);
                }
            }
            match old2 {
                Some(v) => {
                    m2.insert(b2, v);
                }
                None => {
                    m2.remove(b2);
                }
            }
            ok
        }
        _ => false,
    }
}

/// Alpha-equivalence of types, comparing arrow effects modulo the effect
/// equivalence laws. Quantifier kinds must match exactly.
pub fn type_equiv(t1: &Type, t2: &Type) -> bool {
    ty_eq(t1, t2, &mut BTreeMap::new(), &mut BTreeMap::new(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Kind;
    use proptest::prelude::*;

    #[test]
    fn normalize_unit_idempotence_union() {
        assert!(effect_normalize(&Effect::join(Effect::Pure, Effect::Pure)).atoms.is_empty());
        let nf = effect_normalize(&Effect::join(Effect::var("a"), Effect::var("a")));
        assert_eq!(nf.atoms.len(), 1);
        let nf = effect_normalize(&Effect::join(
            Effect::join(Effect::var("a"), Effect::var("b")),
            Effect::join(Effect::var("b"), Effect::Pure),
        ));
        assert_eq!(
            nf.atoms.into_iter().collect::<Vec<_>>(),
            vec![Ident::rigid("a"), Ident::rigid("b")]
        );
    }

    #[test]
    fn equiv_examples() {
        let ab = Effect::join(Effect::var("a"), Effect::var("b"));
        let bab = Effect::join3(Effect::var("b"), Effect::var("a"), Effect::var("b"));
        assert!(effect_equiv(&ab, &bab));
        assert!(!effect_equiv(&Effect::Pure, &Effect::var("a")));
        assert!(effect_equiv(
            &Effect::join(Effect::unif_var("X"), Effect::Pure),
            &Effect::unif_var("X")
        ));
    }

    fn poly_id(name: &str) -> Type {
        Type::forall(
            Ident::rigid(name),
            Kind::Type,
            Type::arrow(Type::var(name), Effect::Pure, Type::var(name)),
        )
    }

    #[test]
    fn type_equiv_alpha() {
        assert!(type_equiv(&poly_id("a"), &poly_id("b")));
    }

    #[test]
    fn type_equiv_distinguishes_free_from_bound() {
        let t1 = Type::forall(Ident::rigid("a"), Kind::Type, Type::var("a"));
        let t2 = Type::forall(Ident::rigid("a"), Kind::Type, Type::var("b"));
        assert!(!type_equiv(&t1, &t2));
    }

    #[test]
    fn type_equiv_compares_effects_modulo_aci() {
        let t1 = Type::arrow(
            Type::var("t1"),
            Effect::join(Effect::var("a"), Effect::var("b")),
            Type::var("t2"),
        );
        let t2 = Type::arrow(
            Type::var("t1"),
            Effect::join3(Effect::var("b"), Effect::var("a"), Effect::var("b")),
            Type::var("t2"),
        );
        assert!(type_equiv(&t1, &t2));
    }

    #[test]
    fn type_equiv_pairs_effect_binders() {
        let mk = |n: &str| {
            Type::forall(
                Ident::rigid(n),
                Kind::Effect,
                Type::arrow(Type::var("t"), Effect::var(n), Type::var("t")),
            )
        };
        assert!(type_equiv(&mk("e"), &mk("f")));
        // A free effect variable does not match a bound one.
        let free = Type::forall(
            Ident::rigid("e"),
            Kind::Effect,
            Type::arrow(Type::var("t"), Effect::var("g"), Type::var("t")),
        );
        assert!(!type_equiv(&mk("e"), &free));
    }

    fn arb_effect() -> impl Strategy<Value = Effect> {
        let leaf = prop_oneof![
            Just(Effect::Pure),
            prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Effect::var),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Effect::join(l, r))
        })
    }

    proptest! {
        #[test]
        fn aci_laws(e1 in arb_effect(), e2 in arb_effect(), e3 in arb_effect()) {
            let assoc_l = Effect::join(Effect::join(e1.clone(), e2.clone()), e3.clone());
            let assoc_r = Effect::join(e1.clone(), Effect::join(e2.clone(), e3.clone()));
            prop_assert!(effect_equiv(&assoc_l, &assoc_r));
            prop_assert!(effect_equiv(
                &Effect::join(e1.clone(), e2.clone()),
                &Effect::join(e2.clone(), e1.clone())
            ));
            prop_assert!(effect_equiv(&Effect::join(e1.clone(), e1.clone()), &e1));
            prop_assert!(effect_equiv(&Effect::join(e1.clone(), Effect::Pure), &e1));
        }

        #[test]
        fn join_congruence(e1 in arb_effect(), e2 in arb_effect(), e3 in arb_effect()) {
            if effect_equiv(&e1, &e2) {
                prop_assert!(effect_equiv(
                    &Effect::join(e1.clone(), e3.clone()),
                    &Effect::join(e2.clone(), e3.clone())
                ));
            }
        }
    }
}
