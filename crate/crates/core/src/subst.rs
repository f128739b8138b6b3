//! Substitutions over type and effect identifiers, applied in either
//! capturing or capture-avoiding mode.
//!
//! Capturing application is pure textual replacement: binders are never
//! renamed and any occurrence outside binding position is replaced, including
//! occurrences under binders of the same name. Capture-avoiding application
//! is the standard discipline that renames binders when a capture would
//! occur.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    Binding, Descriptor, Effect, Env, FreeVars, FreshOrigin, FreshSupply, Ident, Kind, Type,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("kind mismatch: {ident} is mapped at kind {found} but occurs at kind {needed}")]
    KindMismatch { ident: Ident, needed: Kind, found: Kind },
}

/// A finite map from identifiers to descriptors. The kind of each entry is
/// the kind tag of its descriptor; applying an entry at the other kind is an
/// error.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<Ident, Descriptor>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn singleton(ident: Ident, descr: Descriptor) -> Subst {
        let mut map = BTreeMap::new();
        map.insert(ident, descr);
        Subst { map }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Ident, Descriptor)>) -> Subst {
        Subst { map: pairs.into_iter().collect() }
    }

    pub fn insert(&mut self, ident: Ident, descr: Descriptor) {
        self.map.insert(ident, descr);
    }

    pub fn get(&self, ident: &Ident) -> Option<&Descriptor> {
        self.map.get(ident)
    }

    /// `s(i)`: the image of `i` as a type, or `i` itself when unmapped.
    pub fn lookup_type(&self, ident: &Ident) -> Result<Type, SubstError> {
        match self.map.get(ident) {
            None => Ok(Type::Var(ident.clone())),
            Some(Descriptor::Ty(t)) => Ok(t.clone()),
            Some(Descriptor::Eff(_)) => Err(SubstError::KindMismatch {
                ident: ident.clone(),
                needed: Kind::Type,
                found: Kind::Effect,
            }),
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &Ident> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Descriptor)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn without(&self, ident: &Ident) -> Subst {
        let mut map = self.map.clone();
        map.remove(ident);
        Subst { map }
    }

    /// Composition `later . earlier`: on the domain of `earlier` it is
    /// `later` applied to the image; elsewhere it is `later`.
    pub fn compose(later: &Subst, earlier: &Subst) -> Result<Subst, SubstError> {
        let mut map = BTreeMap::new();
        for (i, d) in earlier.iter() {
            map.insert(i.clone(), later.apply_descriptor(d)?);
        }
        for (i, d) in later.iter() {
            map.entry(i.clone()).or_insert_with(|| d.clone());
        }
        Ok(Subst { map })
    }

    // -- capturing application ------------------------------------------------

    pub fn apply_effect(&self, e: &Effect) -> Result<Effect, SubstError> {
        match e {
            Effect::Var(i) => match self.map.get(i) {
                None => Ok(e.clone()),
                Some(Descriptor::Eff(img)) => Ok(img.clone()),
                Some(Descriptor::Ty(_)) => Err(SubstError::KindMismatch {
                    ident: i.clone(),
                    needed: Kind::Effect,
                    found: Kind::Type,
                }),
            },
            Effect::Pure => Ok(Effect::Pure),
            Effect::Join(l, r) => Ok(Effect::join(self.apply_effect(l)?, self.apply_effect(r)?)),
        }
    }

    pub fn apply_type(&self, t: &Type) -> Result<Type, SubstError> {
        match t {
            Type::Var(i) => self.lookup_type(i),
            Type::Arrow(a, e, r) => Ok(Type::arrow(
                self.apply_type(a)?,
                self.apply_effect(e)?,
                self.apply_type(r)?,
            )),
            // Binders are left alone; the whole map descends into the body.
            Type::Forall(b, k, body) => Ok(Type::Forall(b.clone(), *k, Box::new(self.apply_type(body)?))),
        }
    }

    pub fn apply_descriptor(&self, d: &Descriptor) -> Result<Descriptor, SubstError> {
        match d {
            Descriptor::Ty(t) => Ok(Descriptor::Ty(self.apply_type(t)?)),
            Descriptor::Eff(e) => Ok(Descriptor::Eff(self.apply_effect(e)?)),
        }
    }

    /// Capturing application to an environment: assigned types are
    /// substituted, kind bindings stay as they are.
    pub fn apply_env(&self, env: &Env) -> Result<Env, SubstError> {
        let mut out = Env::new();
        for b in env.bindings() {
            out = match b {
                Binding::Kind(i, k) => out.extended_kind(i.clone(), *k),
                Binding::Term(x, t) => out.extended_term(x.clone(), self.apply_type(t)?),
            };
        }
        Ok(out)
    }

    // -- capture-avoiding application -----------------------------------------

    pub fn avoiding_effect(&self, e: &Effect) -> Result<Effect, SubstError> {
        // Effects have no binders; both disciplines coincide.
        self.apply_effect(e)
    }

    pub fn avoiding_type(&self, t: &Type, fs: &mut FreshSupply) -> Result<Type, SubstError> {
        match t {
            Type::Var(i) => self.lookup_type(i),
            Type::Arrow(a, e, r) => Ok(Type::arrow(
                self.avoiding_type(a, fs)?,
                self.apply_effect(e)?,
                self.avoiding_type(r, fs)?,
            )),
            Type::Forall(b, k, body) => {
                let pruned = self.without(b);
                if pruned.is_empty() {
                    return Ok(t.clone());
                }
                let body_fv = body.free_vars();
                let capture = pruned.iter().any(|(i, d)| {
                    i != b && body_fv.contains(i) && d.free_vars().contains(b)
                });
                if capture {
                    let mut avoid = body_fv;
                    for (_, d) in pruned.iter() {
                        d.collect_free(&mut avoid);
                    }
                    avoid.insert(b.clone());
                    let fresh = fs.fresh_rigid_avoiding(*k, FreshOrigin::Binder, &avoid);
                    let rename = Subst::singleton(b.clone(), Descriptor::var_at(fresh.clone(), *k));
                    let renamed = rename.avoiding_type(body, fs)?;
                    Ok(Type::Forall(fresh, *k, Box::new(pruned.avoiding_type(&renamed, fs)?)))
                } else {
                    Ok(Type::Forall(b.clone(), *k, Box::new(pruned.avoiding_type(body, fs)?)))
                }
            }
        }
    }

    pub fn avoiding_descriptor(&self, d: &Descriptor, fs: &mut FreshSupply) -> Result<Descriptor, SubstError> {
        match d {
            Descriptor::Ty(t) => Ok(Descriptor::Ty(self.avoiding_type(t, fs)?)),
            Descriptor::Eff(e) => Ok(Descriptor::Eff(self.avoiding_effect(e)?)),
        }
    }
}

impl FreeVars for Subst {
    /// Free identifiers of the range.
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        for (_, d) in self.iter() {
            d.collect_free(out);
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, (i, d)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", i, d)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::type_equiv;
    use crate::syntax::Kind;

    fn forall_b_arrow() -> Type {
        // forall (b:Type). a -{pure}-> b
        Type::forall(
            Ident::rigid("b"),
            Kind::Type,
            Type::arrow(Type::var("a"), Effect::Pure, Type::var("b")),
        )
    }

    #[test]
    fn capturing_captures() {
        // [a -> b](forall (b:Type). a -{pure}-> b) = forall (b:Type). b -{pure}-> b
        let s = Subst::singleton(Ident::rigid("a"), Descriptor::Ty(Type::var("b")));
        let got = s.apply_type(&forall_b_arrow()).unwrap();
        let want = Type::forall(
            Ident::rigid("b"),
            Kind::Type,
            Type::arrow(Type::var("b"), Effect::Pure, Type::var("b")),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn capturing_instantiates_under_binder() {
        // [?X -> a](forall (a:Type). ?X) = forall (a:Type). a
        let s = Subst::singleton(Ident::unif("X"), Descriptor::Ty(Type::var("a")));
        let t = Type::forall(Ident::rigid("a"), Kind::Type, Type::unif_var("X"));
        let got = s.apply_type(&t).unwrap();
        assert_eq!(got, Type::forall(Ident::rigid("a"), Kind::Type, Type::var("a")));
    }

    #[test]
    fn capturing_identity_off_domain() {
        let s = Subst::singleton(Ident::rigid("a"), Descriptor::Ty(Type::var("c")));
        assert_eq!(s.apply_type(&Type::var("b")).unwrap(), Type::var("b"));
    }

    #[test]
    fn avoiding_renames_on_capture() {
        // {a -> b}(forall (b:Type). a -{pure}-> b) renames the binder.
        let s = Subst::singleton(Ident::rigid("a"), Descriptor::Ty(Type::var("b")));
        let mut fs = FreshSupply::new();
        let got = s.avoiding_type(&forall_b_arrow(), &mut fs).unwrap();
        match &got {
            Type::Forall(binder, Kind::Type, body) => {
                assert_ne!(binder, &Ident::rigid("b"));
                let want = Type::arrow(Type::var("b"), Effect::Pure, Type::Var(binder.clone()));
                assert_eq!(body.as_ref(), &want);
            }
            other => panic!("expected forall, got {other}"),
        }
        // Alpha-equivalent to the intended result regardless of the name.
        let intended = Type::forall(
            Ident::rigid("fresh"),
            Kind::Type,
            Type::arrow(Type::var("b"), Effect::Pure, Type::var("fresh")),
        );
        assert!(type_equiv(&got, &intended));
    }

    #[test]
    fn avoiding_no_capture_no_rename() {
        // {a -> b}(forall (c:Type). a) = forall (c:Type). b
        let s = Subst::singleton(Ident::rigid("a"), Descriptor::Ty(Type::var("b")));
        let t = Type::forall(Ident::rigid("c"), Kind::Type, Type::var("a"));
        let mut fs = FreshSupply::new();
        let got = s.avoiding_type(&t, &mut fs).unwrap();
        assert_eq!(got, Type::forall(Ident::rigid("c"), Kind::Type, Type::var("b")));
    }

    #[test]
    fn kind_mismatch_is_detected() {
        let s = Subst::singleton(Ident::rigid("a"), Descriptor::Eff(Effect::Pure));
        let err = s.apply_type(&Type::var("a")).unwrap_err();
        assert!(matches!(err, SubstError::KindMismatch { needed: Kind::Type, .. }));
    }

    #[test]
    fn composition_law_on_a_sample() {
        let s1 = Subst::singleton(Ident::unif("X"), Descriptor::Ty(Type::var("a")));
        let s2 = Subst::singleton(Ident::rigid("a"), Descriptor::Ty(Env::int_type()));
        let t = Type::arrow(Type::unif_var("X"), Effect::Pure, Type::var("a"));
        let composed = Subst::compose(&s2, &s1).unwrap();
        let lhs = composed.apply_type(&t).unwrap();
        let rhs = s2.apply_type(&s1.apply_type(&t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
