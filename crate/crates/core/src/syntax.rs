//! Core syntax: identifiers, kinds, effects, types, descriptors, expressions,
//! typing environments, and the fresh-name supply.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Distinguishes program-level (rigid) variables from unification variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// A variable written in source or introduced by a quantifier.
    Rigid,
    /// A placeholder invented by the algorithm; never written by users.
    Unif,
}

/// A type- or effect-level identifier.
///
/// Identifiers minted by a [`FreshSupply`] carry a nonzero serial; identifiers
/// written in source programs always have serial 0. Two identifiers are equal
/// iff name, flavor and serial are all equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident {
    pub name: String,
    pub flavor: Flavor,
    pub serial: u64,
}

impl Ident {
    pub fn rigid(name: impl Into<String>) -> Ident {
        Ident { name: name.into(), flavor: Flavor::Rigid, serial: 0 }
    }

    pub fn unif(name: impl Into<String>) -> Ident {
        Ident { name: name.into(), flavor: Flavor::Unif, serial: 0 }
    }

    pub fn is_unif(&self) -> bool {
        self.flavor == Flavor::Unif
    }

    pub fn is_rigid(&self) -> bool {
        self.flavor == Flavor::Rigid
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Rigid => write!(f, "{}", self.name)?,
            Flavor::Unif => write!(f, "?{}", self.name)?,
        }
        if self.serial != 0 {
            write!(f, "{}", self.serial)?;
        }
        Ok(())
    }
}

/// Classifier for descriptors: types vs effects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Type,
    Effect,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Type => write!(f, "Type"),
            Kind::Effect => write!(f, "Effect"),
        }
    }
}

/// Effects: variables, the pure effect, and joins.
///
/// No normalization happens at construction; the tree is kept as written.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Effect {
    Var(Ident),
    Pure,
    Join(Box<Effect>, Box<Effect>),
}

impl Effect {
    pub fn var(name: impl Into<String>) -> Effect {
        Effect::Var(Ident::rigid(name))
    }

    pub fn unif_var(name: impl Into<String>) -> Effect {
        Effect::Var(Ident::unif(name))
    }

    pub fn join(lhs: Effect, rhs: Effect) -> Effect {
        Effect::Join(Box::new(lhs), Box::new(rhs))
    }

    /// Left-associated join of three effects, the shape `e1 | e2 | e3`.
    pub fn join3(a: Effect, b: Effect, c: Effect) -> Effect {
        Effect::join(Effect::join(a, b), c)
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Var(i) => write!(f, "{}", i),
            Effect::Pure => write!(f, "pure"),
            Effect::Join(l, r) => write!(f, "{} | {}", l, r),
        }
    }
}

/// Types: variables, effect-annotated arrows, and polymorphic types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(Ident),
    Arrow(Box<Type>, Effect, Box<Type>),
    Forall(Ident, Kind, Box<Type>),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(Ident::rigid(name))
    }

    pub fn unif_var(name: impl Into<String>) -> Type {
        Type::Var(Ident::unif(name))
    }

    pub fn arrow(arg: Type, eff: Effect, res: Type) -> Type {
        Type::Arrow(Box::new(arg), eff, Box::new(res))
    }

    pub fn forall(binder: Ident, kind: Kind, body: Type) -> Type {
        debug_assert!(binder.is_rigid(), "quantifier binders are rigid");
        Type::Forall(binder, kind, Box::new(body))
    }

    /// True iff the type contains no quantifier at any depth. Arrow effects
    /// are unrestricted.
    pub fn monotype(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Arrow(arg, _, res) => arg.monotype() && res.monotype(),
            Type::Forall(_, _, _) => false,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(i) => write!(f, "{}", i),
            Type::Arrow(arg, eff, res) => {
                match arg.as_ref() {
                    Type::Var(_) => write!(f, "{}", arg)?,
                    _ => write!(f, "({})", arg)?,
                }
                write!(f, " -{{{}}}-> {}", eff, res)
            }
            Type::Forall(a, k, body) => write!(f, "forall ({}:{}). {}", a, k, body),
        }
    }
}

/// A type or an effect: the things type applications can pass.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Descriptor {
    Ty(Type),
    Eff(Effect),
}

impl Descriptor {
    /// The kind this descriptor inhabits by its own shape.
    pub fn kind_tag(&self) -> Kind {
        match self {
            Descriptor::Ty(_) => Kind::Type,
            Descriptor::Eff(_) => Kind::Effect,
        }
    }

    /// Re-tag a bare variable at the given kind. Identifiers are shared
    /// between the type and effect grammars, so a descriptor parsed as a type
    /// variable may really denote an effect variable (and vice versa).
    pub fn coerced_to(&self, kind: Kind) -> Option<Descriptor> {
        match (self, kind) {
            (Descriptor::Ty(_), Kind::Type) | (Descriptor::Eff(_), Kind::Effect) => {
                Some(self.clone())
            }
            (Descriptor::Ty(Type::Var(i)), Kind::Effect) => {
                Some(Descriptor::Eff(Effect::Var(i.clone())))
            }
            (Descriptor::Eff(Effect::Var(i)), Kind::Type) => {
                Some(Descriptor::Ty(Type::Var(i.clone())))
            }
            _ => None,
        }
    }

    /// A variable descriptor of the requested kind.
    pub fn var_at(ident: Ident, kind: Kind) -> Descriptor {
        match kind {
            Kind::Type => Descriptor::Ty(Type::Var(ident)),
            Kind::Effect => Descriptor::Eff(Effect::Var(ident)),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Ty(t) => write!(f, "{}", t),
            Descriptor::Eff(e) => write!(f, "{}", e),
        }
    }
}

/// A term-level variable. Term variables are a separate syntactic category
/// from type and effect identifiers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermVar(pub String);

impl TermVar {
    pub fn new(name: impl Into<String>) -> TermVar {
        TermVar(name.into())
    }
}

impl fmt::Display for TermVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Expressions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Var(TermVar),
    Int(i64),
    /// Annotated lambda: `fn (x:T) -> e`.
    Lam(TermVar, Type, Box<Expr>),
    /// Unannotated lambda: `fn x -> e`. The argument type is inferred and
    /// must be monomorphic.
    LamU(TermVar, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    /// Type abstraction: `tfn (a:K) -> e`.
    TyAbs(Ident, Kind, Box<Expr>),
    /// Type application: `e[D]`.
    TyApp(Box<Expr>, Descriptor),
    Let(TermVar, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(TermVar::new(name))
    }

    pub fn lam(x: impl Into<String>, annot: Type, body: Expr) -> Expr {
        Expr::Lam(TermVar::new(x), annot, Box::new(body))
    }

    pub fn lam_u(x: impl Into<String>, body: Expr) -> Expr {
        Expr::LamU(TermVar::new(x), Box::new(body))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn ty_abs(binder: Ident, kind: Kind, body: Expr) -> Expr {
        debug_assert!(binder.is_rigid(), "type abstraction binders are rigid");
        Expr::TyAbs(binder, kind, Box::new(body))
    }

    pub fn ty_app(f: Expr, d: Descriptor) -> Expr {
        Expr::TyApp(Box::new(f), d)
    }

    pub fn let_in(x: impl Into<String>, bound: Expr, body: Expr) -> Expr {
        Expr::Let(TermVar::new(x), Box::new(bound), Box::new(body))
    }

    /// Number of expression nodes; used by the shrinker.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Int(_) => 1,
            Expr::Lam(_, _, b) | Expr::LamU(_, b) | Expr::TyAbs(_, _, b) => 1 + b.size(),
            Expr::TyApp(f, _) => 1 + f.size(),
            Expr::App(f, a) | Expr::Let(_, f, a) => 1 + f.size() + a.size(),
        }
    }
}

fn fmt_expr(e: &Expr, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = match e {
        Expr::Lam(..) | Expr::LamU(..) | Expr::TyAbs(..) | Expr::Let(..) => prec > 0,
        Expr::App(..) | Expr::TyApp(..) => prec > 1,
        Expr::Var(_) | Expr::Int(_) => false,
    };
    if needs_parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Var(x) => write!(f, "{}", x)?,
        Expr::Int(n) => write!(f, "{}", n)?,
        Expr::Lam(x, t, b) => {
            write!(f, "fn ({}:{}) -> ", x, t)?;
            fmt_expr(b, 0, f)?;
        }
        Expr::LamU(x, b) => {
            write!(f, "fn {} -> ", x)?;
            fmt_expr(b, 0, f)?;
        }
        Expr::TyAbs(a, k, b) => {
            write!(f, "tfn ({}:{}) -> ", a, k)?;
            fmt_expr(b, 0, f)?;
        }
        Expr::App(fun, arg) => {
            fmt_expr(fun, 1, f)?;
            write!(f, " ")?;
            fmt_expr(arg, 2, f)?;
        }
        Expr::TyApp(fun, d) => {
            fmt_expr(fun, 1, f)?;
            write!(f, "[{}]", d)?;
        }
        Expr::Let(x, bound, body) => {
            write!(f, "let {} = ", x)?;
            fmt_expr(bound, 0, f)?;
            write!(f, " in ")?;
            fmt_expr(body, 0, f)?;
        }
    }
    if needs_parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

/// An environment binding: a kinded type/effect variable or a typed term
/// variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Kind(Ident, Kind),
    Term(TermVar, Type),
}

/// An ordered typing environment. Lookup returns the rightmost binding.
///
/// The environment also carries a registry of kinds for identifiers minted by
/// a [`FreshSupply`]; the kinding rules have no case for unification
/// variables, so kinding of algorithm-internal descriptors consults the
/// registry instead.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: Vec<Binding>,
    registry: BTreeMap<Ident, Kind>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    /// The base environment: `Int` bound at kind `Type`.
    pub fn prelude() -> Env {
        Env::new().extended_kind(Ident::rigid("Int"), Kind::Type)
    }

    pub fn int_ident() -> Ident {
        Ident::rigid("Int")
    }

    pub fn int_type() -> Type {
        Type::Var(Env::int_ident())
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn extended_kind(&self, ident: Ident, kind: Kind) -> Env {
        let mut env = self.clone();
        env.bindings.push(Binding::Kind(ident, kind));
        env
    }

    pub fn extended_term(&self, x: TermVar, ty: Type) -> Env {
        let mut env = self.clone();
        env.bindings.push(Binding::Term(x, ty));
        env
    }

    pub fn lookup_term(&self, x: &TermVar) -> Option<&Type> {
        self.bindings.iter().rev().find_map(|b| match b {
            Binding::Term(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    /// Kind of an identifier: rightmost kind binding, falling back to the
    /// fresh-identifier registry.
    pub fn lookup_kind(&self, ident: &Ident) -> Option<Kind> {
        self.bindings
            .iter()
            .rev()
            .find_map(|b| match b {
                Binding::Kind(i, k) if i == ident => Some(*k),
                _ => None,
            })
            .or_else(|| self.registry.get(ident).copied())
    }

    /// Domain query `(a:K) in G`: matches kind bindings only.
    pub fn domain_contains(&self, ident: &Ident) -> bool {
        self.bindings
            .iter()
            .any(|b| matches!(b, Binding::Kind(i, _) if i == ident))
    }

    /// Copy the kinds of every identifier the supply has minted so far into
    /// this environment's registry.
    pub fn with_registry_from(&self, fs: &FreshSupply) -> Env {
        let mut env = self.clone();
        for (i, k) in fs.kind_registry() {
            env.registry.insert(i.clone(), *k);
        }
        env
    }

    /// Rigid identifiers bound at kind `Effect` in the environment domain.
    pub fn effect_domain(&self) -> BTreeSet<Ident> {
        self.bindings
            .iter()
            .filter_map(|b| match b {
                Binding::Kind(i, Kind::Effect) => Some(i.clone()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, b) in self.bindings.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            match b {
                Binding::Kind(i, k) => write!(f, "{}:{}", i, k)?,
                Binding::Term(x, t) => write!(f, "{}:{}", x, t)?,
            }
        }
        write!(f, "]")
    }
}

/// What a fresh rigid identifier was minted for. Escape diagnostics need to
/// tell renamed binders apart from the constants unification and constraint
/// copying invent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreshOrigin {
    /// A binder renamed during the global alpha-renaming pass.
    Binder,
    /// The fresh variable both quantifier bodies are opened with during
    /// unification.
    Opener,
    /// The fresh constant standing for a hypothetical instantiation in a
    /// copied constraint set.
    Const,
}

/// A deterministic supply of fresh identifiers.
///
/// Single-owner mutable state: operations that generate names hold it
/// exclusively. Every minted identifier records its kind (and, for rigid
/// identifiers, its origin).
#[derive(Debug, Clone)]
pub struct FreshSupply {
    next: u64,
    kinds: BTreeMap<Ident, Kind>,
    origins: BTreeMap<Ident, FreshOrigin>,
}

impl Default for FreshSupply {
    fn default() -> Self {
        FreshSupply::new()
    }
}

impl FreshSupply {
    pub fn new() -> FreshSupply {
        FreshSupply { next: 1, kinds: BTreeMap::new(), origins: BTreeMap::new() }
    }

    fn take_serial(&mut self) -> u64 {
        let n = self.next;
        self.next += 1;
        n
    }

    /// Fresh rigid identifier, rendered `%b<serial>`.
    pub fn fresh_rigid(&mut self, kind: Kind, origin: FreshOrigin) -> Ident {
        let ident = Ident { name: "%b".to_string(), flavor: Flavor::Rigid, serial: self.take_serial() };
        self.kinds.insert(ident.clone(), kind);
        self.origins.insert(ident.clone(), origin);
        ident
    }

    /// Fresh rigid identifier guaranteed not to be in `avoid`, regardless of
    /// how the supply was seeded.
    pub fn fresh_rigid_avoiding(
        &mut self,
        kind: Kind,
        origin: FreshOrigin,
        avoid: &BTreeSet<Ident>,
    ) -> Ident {
        loop {
            let ident = self.fresh_rigid(kind, origin);
            if !avoid.contains(&ident) {
                return ident;
            }
        }
    }

    /// Fresh unification variable, rendered `?X<serial>`.
    pub fn fresh_unif(&mut self, kind: Kind) -> Ident {
        let ident = Ident { name: "X".to_string(), flavor: Flavor::Unif, serial: self.take_serial() };
        self.kinds.insert(ident.clone(), kind);
        ident
    }

    /// Make sure future serials are strictly greater than `serial`.
    pub fn advance_past(&mut self, serial: u64) {
        if self.next <= serial {
            self.next = serial + 1;
        }
    }

    pub fn kind_registry(&self) -> &BTreeMap<Ident, Kind> {
        &self.kinds
    }

    pub fn kind_of_fresh(&self, ident: &Ident) -> Option<Kind> {
        self.kinds.get(ident).copied()
    }

    pub fn origin_of(&self, ident: &Ident) -> Option<FreshOrigin> {
        self.origins.get(ident).copied()
    }
}

/// Largest serial occurring anywhere in a type; used to seed standalone
/// supplies so "fresh" really is fresh.
pub fn max_serial_of_type(ty: &Type) -> u64 {
    fn go_eff(e: &Effect, max: &mut u64) {
        match e {
            Effect::Var(i) => *max = (*max).max(i.serial),
            Effect::Pure => {}
            Effect::Join(l, r) => {
                go_eff(l, max);
                go_eff(r, max);
            }
        }
    }
    fn go(t: &Type, max: &mut u64) {
        match t {
            Type::Var(i) => *max = (*max).max(i.serial),
            Type::Arrow(a, e, r) => {
                go(a, max);
                go_eff(e, max);
                go(r, max);
            }
            Type::Forall(b, _, body) => {
                *max = (*max).max(b.serial);
                go(body, max);
            }
        }
    }
    let mut max = 0;
    go(ty, &mut max);
    max
}

// ---------------------------------------------------------------------------
// Free and bound identifiers
// ---------------------------------------------------------------------------

fn free_eff(e: &Effect, bound: &[Ident], out: &mut BTreeSet<Ident>) {
    match e {
        Effect::Var(i) => {
            if !bound.contains(i) {
                out.insert(i.clone());
            }
        }
        Effect::Pure => {}
        Effect::Join(l, r) => {
            free_eff(l, bound, out);
            free_eff(r, bound, out);
        }
    }
}

fn free_ty(t: &Type, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match t {
        Type::Var(i) => {
            if !bound.contains(i) {
                out.insert(i.clone());
            }
        }
        Type::Arrow(a, e, r) => {
            free_ty(a, bound, out);
            free_eff(e, bound, out);
            free_ty(r, bound, out);
        }
        Type::Forall(b, _, body) => {
            bound.push(b.clone());
            free_ty(body, bound, out);
            bound.pop();
        }
    }
}

fn free_expr(e: &Expr, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match e {
        Expr::Var(_) | Expr::Int(_) => {}
        Expr::Lam(_, t, b) => {
            free_ty(t, bound, out);
            free_expr(b, bound, out);
        }
        Expr::LamU(_, b) => free_expr(b, bound, out),
        Expr::App(f, a) | Expr::Let(_, f, a) => {
            free_expr(f, bound, out);
            free_expr(a, bound, out);
        }
        Expr::TyAbs(a, _, b) => {
            bound.push(a.clone());
            free_expr(b, bound, out);
            bound.pop();
        }
        Expr::TyApp(f, d) => {
            free_expr(f, bound, out);
            match d {
                Descriptor::Ty(t) => free_ty(t, bound, out),
                Descriptor::Eff(eff) => free_eff(eff, bound, out),
            }
        }
    }
}

/// Anything whose free type/effect identifiers can be collected.
pub trait FreeVars {
    fn collect_free(&self, out: &mut BTreeSet<Ident>);

    /// All identifiers (both flavors) occurring free.
    fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    /// Only the unification variables occurring free.
    fn free_unif_vars(&self) -> BTreeSet<Ident> {
        self.free_vars().into_iter().filter(Ident::is_unif).collect()
    }
}

impl FreeVars for Effect {
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        free_eff(self, &[], out);
    }
}

impl FreeVars for Type {
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        free_ty(self, &mut Vec::new(), out);
    }
}

impl FreeVars for Descriptor {
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Descriptor::Ty(t) => t.collect_free(out),
            Descriptor::Eff(e) => e.collect_free(out),
        }
    }
}

impl FreeVars for Expr {
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        free_expr(self, &mut Vec::new(), out);
    }
}

impl FreeVars for Env {
    /// Identifiers "appearing in the environment": the domain of its kind
    /// bindings plus the free identifiers of every assigned type.
    fn collect_free(&self, out: &mut BTreeSet<Ident>) {
        for b in self.bindings() {
            match b {
                Binding::Kind(i, _) => {
                    out.insert(i.clone());
                }
                Binding::Term(_, t) => t.collect_free(out),
            }
        }
    }
}

/// Binder occurrences, in traversal order, with the stack of enclosing
/// binders visible at each occurrence. The callback returns `false` to stop.
pub trait BoundVars {
    fn walk_binders(&self, stack: &mut Vec<Ident>, visit: &mut dyn FnMut(&Ident, &[Ident]) -> bool) -> bool;

    /// Every binder occurrence (with duplicates), in traversal order.
    fn bound_vars(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.walk_binders(&mut Vec::new(), &mut |b, _| {
            out.push(b.clone());
            true
        });
        out
    }
}

impl BoundVars for Type {
    fn walk_binders(&self, stack: &mut Vec<Ident>, visit: &mut dyn FnMut(&Ident, &[Ident]) -> bool) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Arrow(a, _, r) => {
                a.walk_binders(stack, visit) && r.walk_binders(stack, visit)
            }
            Type::Forall(b, _, body) => {
                if !visit(b, stack) {
                    return false;
                }
                stack.push(b.clone());
                let ok = body.walk_binders(stack, visit);
                stack.pop();
                ok
            }
        }
    }
}

impl BoundVars for Descriptor {
    fn walk_binders(&self, stack: &mut Vec<Ident>, visit: &mut dyn FnMut(&Ident, &[Ident]) -> bool) -> bool {
        match self {
            Descriptor::Ty(t) => t.walk_binders(stack, visit),
            Descriptor::Eff(_) => true,
        }
    }
}

impl BoundVars for Expr {
    fn walk_binders(&self, stack: &mut Vec<Ident>, visit: &mut dyn FnMut(&Ident, &[Ident]) -> bool) -> bool {
        match self {
            Expr::Var(_) | Expr::Int(_) => true,
            Expr::Lam(_, t, b) => t.walk_binders(stack, visit) && b.walk_binders(stack, visit),
            Expr::LamU(_, b) => b.walk_binders(stack, visit),
            Expr::App(f, a) | Expr::Let(_, f, a) => {
                f.walk_binders(stack, visit) && a.walk_binders(stack, visit)
            }
            Expr::TyAbs(a, _, b) => {
                if !visit(a, stack) {
                    return false;
                }
                stack.push(a.clone());
                let ok = b.walk_binders(stack, visit);
                stack.pop();
                ok
            }
            Expr::TyApp(f, d) => f.walk_binders(stack, visit) && d.walk_binders(stack, visit),
        }
    }
}

impl BoundVars for Env {
    /// Binders occurring inside assigned types. Each type is a separate
    /// term: entries do not nest.
    fn walk_binders(&self, _stack: &mut Vec<Ident>, visit: &mut dyn FnMut(&Ident, &[Ident]) -> bool) -> bool {
        for b in self.bindings() {
            if let Binding::Term(_, t) = b {
                if !t.walk_binders(&mut Vec::new(), visit) {
                    return false;
                }
            }
        }
        true
    }
}
