//! Kinding, the two uniqueness predicates on bound variables, and the global
//! alpha-renaming pass that establishes them.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{
    BoundVars, Descriptor, Effect, Env, Expr, FreshOrigin, FreshSupply, Ident, Kind, Type,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KindError {
    #[error("unbound variable {0}")]
    UnboundVariable(Ident),
    #[error("kind mismatch: expected {expected}, found {found} in {context}")]
    KindMismatch { expected: Kind, found: Kind, context: String },
}

fn expect_kind(got: Kind, want: Kind, context: impl Fn() -> String) -> Result<(), KindError> {
    if got == want {
        Ok(())
    } else {
        Err(KindError::KindMismatch { expected: want, found: got, context: context() })
    }
}

pub fn kind_of_type(env: &Env, t: &Type) -> Result<Kind, KindError> {
    match t {
        Type::Var(i) => env.lookup_kind(i).ok_or_else(|| KindError::UnboundVariable(i.clone())),
        Type::Arrow(a, e, r) => {
            expect_kind(kind_of_type(env, a)?, Kind::Type, || a.to_string())?;
            expect_kind(kind_of_effect(env, e)?, Kind::Effect, || e.to_string())?;
            expect_kind(kind_of_type(env, r)?, Kind::Type, || r.to_string())?;
            Ok(Kind::Type)
        }
        Type::Forall(b, k, body) => {
            let inner = env.extended_kind(b.clone(), *k);
            expect_kind(kind_of_type(&inner, body)?, Kind::Type, || body.to_string())?;
            Ok(Kind::Type)
        }
    }
}

pub fn kind_of_effect(env: &Env, e: &Effect) -> Result<Kind, KindError> {
    match e {
        Effect::Var(i) => env.lookup_kind(i).ok_or_else(|| KindError::UnboundVariable(i.clone())),
        Effect::Pure => Ok(Kind::Effect),
        Effect::Join(l, r) => {
            expect_kind(kind_of_effect(env, l)?, Kind::Effect, || l.to_string())?;
            expect_kind(kind_of_effect(env, r)?, Kind::Effect, || r.to_string())?;
            Ok(Kind::Effect)
        }
    }
}

/// Kind of a descriptor. For a bare variable this is whatever the
/// environment assigns; structural cases impose the kinds their premises
/// require.
pub fn kind_of(env: &Env, d: &Descriptor) -> Result<Kind, KindError> {
    match d {
        Descriptor::Ty(t) => kind_of_type(env, t),
        Descriptor::Eff(e) => kind_of_effect(env, e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniquenessViolation {
    BoundTwice,
    Shadows,
    InEnvDomain,
}

/// Outcome of a uniqueness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub holds: bool,
    pub offending: Option<(Ident, UniquenessViolation)>,
}

impl UniquenessReport {
    fn ok() -> UniquenessReport {
        UniquenessReport { holds: true, offending: None }
    }

    fn violated(ident: Ident, why: UniquenessViolation) -> UniquenessReport {
        UniquenessReport { holds: false, offending: Some((ident, why)) }
    }
}

/// Globally unique bound variables: each binder occurs exactly once in `a`
/// and is not in the domain of `env`.
pub fn globally_unique(env: &Env, a: &impl BoundVars) -> UniquenessReport {
    let mut seen: BTreeSet<Ident> = BTreeSet::new();
    let mut report = UniquenessReport::ok();
    a.walk_binders(&mut Vec::new(), &mut |b, _| {
        if env.domain_contains(b) {
            report = UniquenessReport::violated(b.clone(), UniquenessViolation::InEnvDomain);
            return false;
        }
        if !seen.insert(b.clone()) {
            report = UniquenessReport::violated(b.clone(), UniquenessViolation::BoundTwice);
            return false;
        }
        true
    });
    report
}

/// Locally unique bound variables: no binder in `a` shadows another binder
/// of `a`, and none is in the domain of `env`. Parallel binders of the same
/// name are allowed.
pub fn locally_unique(env: &Env, a: &impl BoundVars) -> UniquenessReport {
    let mut report = UniquenessReport::ok();
    a.walk_binders(&mut Vec::new(), &mut |b, stack| {
        if env.domain_contains(b) {
            report = UniquenessReport::violated(b.clone(), UniquenessViolation::InEnvDomain);
            return false;
        }
        if stack.contains(b) {
            report = UniquenessReport::violated(b.clone(), UniquenessViolation::Shadows);
            return false;
        }
        true
    });
    report
}

/// True when the bound variables of `e` are disjoint from the bound
/// variables occurring inside the environment's assigned types.
pub fn disjoint_bound_vars(env: &Env, e: &Expr) -> bool {
    let expr_binders: BTreeSet<Ident> = e.bound_vars().into_iter().collect();
    let env_binders: BTreeSet<Ident> = env.bound_vars().into_iter().collect();
    expr_binders.is_disjoint(&env_binders)
}

/// Alpha-rename every type and effect binder in `e` to a fresh identifier so
/// the result has globally unique bound variables that share nothing with
/// `env`. If the input already satisfies both conditions it is returned
/// unchanged, keeping source names in diagnostics.
pub fn rename_globally(e: &Expr, env: &Env, fs: &mut FreshSupply) -> Expr {
    if globally_unique(env, e).holds && disjoint_bound_vars(env, e) {
        return e.clone();
    }
    rename_expr(e, &BTreeMap::new(), fs)
}

fn rename_ident(i: &Ident, map: &BTreeMap<Ident, Ident>) -> Ident {
    map.get(i).cloned().unwrap_or_else(|| i.clone())
}

fn rename_effect(e: &Effect, map: &BTreeMap<Ident, Ident>) -> Effect {
    match e {
        Effect::Var(i) => Effect::Var(rename_ident(i, map)),
        Effect::Pure => Effect::Pure,
        Effect::Join(l, r) => Effect::join(rename_effect(l, map), rename_effect(r, map)),
    }
}

fn rename_type(t: &Type, map: &BTreeMap<Ident, Ident>, fs: &mut FreshSupply) -> Type {
    match t {
        Type::Var(i) => Type::Var(rename_ident(i, map)),
        Type::Arrow(a, e, r) => Type::arrow(
            rename_type(a, map, fs),
            rename_effect(e, map),
            rename_type(r, map, fs),
        ),
        Type::Forall(b, k, body) => {
            let fresh = fs.fresh_rigid(*k, FreshOrigin::Binder);
            let mut inner = map.clone();
            inner.insert(b.clone(), fresh.clone());
            Type::Forall(fresh, *k, Box::new(rename_type(body, &inner, fs)))
        }
    }
}

fn rename_descriptor(d: &Descriptor, map: &BTreeMap<Ident, Ident>, fs: &mut FreshSupply) -> Descriptor {
    match d {
        Descriptor::Ty(t) => Descriptor::Ty(rename_type(t, map, fs)),
        Descriptor::Eff(e) => Descriptor::Eff(rename_effect(e, map)),
    }
}

fn rename_expr(e: &Expr, map: &BTreeMap<Ident, Ident>, fs: &mut FreshSupply) -> Expr {
    match e {
        Expr::Var(_) | Expr::Int(_) => e.clone(),
        Expr::Lam(x, t, b) => {
            Expr::Lam(x.clone(), rename_type(t, map, fs), Box::new(rename_expr(b, map, fs)))
        }
        Expr::LamU(x, b) => Expr::LamU(x.clone(), Box::new(rename_expr(b, map, fs))),
        Expr::App(f, a) => Expr::app(rename_expr(f, map, fs), rename_expr(a, map, fs)),
        Expr::TyAbs(a, k, b) => {
            let fresh = fs.fresh_rigid(*k, FreshOrigin::Binder);
            let mut inner = map.clone();
            inner.insert(a.clone(), fresh.clone());
            Expr::TyAbs(fresh, *k, Box::new(rename_expr(b, &inner, fs)))
        }
        Expr::TyApp(f, d) => {
            Expr::TyApp(Box::new(rename_expr(f, map, fs)), rename_descriptor(d, map, fs))
        }
        Expr::Let(x, bound, body) => Expr::Let(
            x.clone(),
            Box::new(rename_expr(bound, map, fs)),
            Box::new(rename_expr(body, map, fs)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::TermVar;

    fn poly_id(name: &str) -> Type {
        Type::forall(
            Ident::rigid(name),
            Kind::Type,
            Type::arrow(Type::var(name), Effect::Pure, Type::var(name)),
        )
    }

    fn example_env() -> Env {
        // [a:Type, x:forall(b:Type).b]
        Env::new()
            .extended_kind(Ident::rigid("a"), Kind::Type)
            .extended_term(
                TermVar::new("x"),
                Type::forall(Ident::rigid("b"), Kind::Type, Type::var("b")),
            )
    }

    #[test]
    fn kind_of_examples() {
        let env = Env::new().extended_kind(Ident::rigid("a"), Kind::Type);
        let arrow = Descriptor::Ty(Type::arrow(Type::var("a"), Effect::Pure, Type::var("a")));
        assert_eq!(kind_of(&env, &arrow), Ok(Kind::Type));

        let env_e = Env::new().extended_kind(Ident::rigid("e"), Kind::Effect);
        let join = Descriptor::Eff(Effect::join(Effect::var("e"), Effect::Pure));
        assert_eq!(kind_of(&env_e, &join), Ok(Kind::Effect));

        let unbound = Descriptor::Ty(Type::forall(Ident::rigid("a"), Kind::Type, Type::var("b")));
        assert_eq!(
            kind_of(&Env::new(), &unbound),
            Err(KindError::UnboundVariable(Ident::rigid("b")))
        );
    }

    #[test]
    fn uniqueness_in_empty_env() {
        let t = Descriptor::Ty(poly_id("a"));
        assert!(globally_unique(&Env::new(), &t).holds);
        assert!(locally_unique(&Env::new(), &t).holds);
    }

    #[test]
    fn uniqueness_env_domain_violation() {
        let env = example_env();
        let t = Descriptor::Ty(poly_id("a"));
        let g = globally_unique(&env, &t);
        assert_eq!(g.offending, Some((Ident::rigid("a"), UniquenessViolation::InEnvDomain)));
        let l = locally_unique(&env, &t);
        assert_eq!(l.offending, Some((Ident::rigid("a"), UniquenessViolation::InEnvDomain)));
    }

    #[test]
    fn parallel_binders_fail_global_but_not_local() {
        let env = example_env();
        let b_id = Type::forall(Ident::rigid("b"), Kind::Type, Type::var("b"));
        let t = Descriptor::Ty(Type::arrow(b_id.clone(), Effect::Pure, b_id));
        let g = globally_unique(&env, &t);
        assert_eq!(g.offending, Some((Ident::rigid("b"), UniquenessViolation::BoundTwice)));
        assert!(locally_unique(&env, &t).holds);
    }

    #[test]
    fn nested_binders_shadow() {
        let env = example_env();
        // forall (c:Type). c -{pure}-> forall (c:Type). c
        let inner = Type::forall(Ident::rigid("c"), Kind::Type, Type::var("c"));
        let t = Descriptor::Ty(Type::forall(
            Ident::rigid("c"),
            Kind::Type,
            Type::arrow(Type::var("c"), Effect::Pure, inner),
        ));
        assert!(!globally_unique(&env, &t).holds);
        let l = locally_unique(&env, &t);
        assert_eq!(l.offending, Some((Ident::rigid("c"), UniquenessViolation::Shadows)));
    }

    #[test]
    fn env_is_locally_unique_wrt_itself() {
        let env = example_env();
        assert!(locally_unique(&env, &env).holds);
    }

    #[test]
    fn rename_shadowed_binders() {
        // tfn (a:Type) -> tfn (a:Type) -> fn (x:a) -> x
        let e = Expr::ty_abs(
            Ident::rigid("a"),
            Kind::Type,
            Expr::ty_abs(
                Ident::rigid("a"),
                Kind::Type,
                Expr::lam("x", Type::var("a"), Expr::var("x")),
            ),
        );
        let mut fs = FreshSupply::new();
        let renamed = rename_globally(&e, &Env::new(), &mut fs);
        let b1 = Ident { name: "%b".into(), flavor: crate::syntax::Flavor::Rigid, serial: 1 };
        let b2 = Ident { name: "%b".into(), flavor: crate::syntax::Flavor::Rigid, serial: 2 };
        let want = Expr::ty_abs(
            b1,
            Kind::Type,
            Expr::ty_abs(b2.clone(), Kind::Type, Expr::lam("x", Type::Var(b2), Expr::var("x"))),
        );
        assert_eq!(renamed, want);
        assert!(globally_unique(&Env::new(), &renamed).holds);
    }

    #[test]
    fn rename_leaves_clean_terms_alone() {
        let e = Expr::lam_u("x", Expr::var("x"));
        let mut fs = FreshSupply::new();
        assert_eq!(rename_globally(&e, &Env::new(), &mut fs), e);
    }
}
