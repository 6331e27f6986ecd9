use rustc_hash::FxHashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::graph::{make_path, GraphHom, Mode, ReflexiveGraph};
use crate::products::{
    associator_between, left_unitor_on, right_unitor_on, swap_between, tensor_hom_between, Exponential, ProductKind,
    Tensor,
};

/// A candidate monoidal structure on reflexive graphs, given by its data on
/// the objects and homs it is asked about.
///
/// Conventions: the associator is `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`, unitors go
/// `I ⊗ A → A` and `A ⊗ I → A`. `internal_hom(B, C)` is right adjoint to
/// `− ⊗ B`; `left_internal_hom(A, C)` is right adjoint to `A ⊗ −`. Closure
/// methods default to [`Error::MissingClosure`].
pub trait TensorOracle: Sync {
    fn name(&self) -> String;
    fn mode(&self) -> Mode;
    fn unit(&self) -> ReflexiveGraph;
    fn tensor_ob(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<ReflexiveGraph>;
    /// `f ⊗ g: dom f ⊗ dom g → cod f ⊗ cod g`.
    fn tensor_hom(&self, f: &GraphHom, g: &GraphHom) -> Result<GraphHom>;
    fn associator(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<GraphHom>;
    fn left_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom>;
    fn right_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom>;

    fn internal_hom(&self, _b: &ReflexiveGraph, _c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        Err(Error::MissingClosure(self.name()))
    }
    /// `[B, k]: [B, C] → [B, C′]` for `k: C → C′`.
    fn internal_hom_map(&self, _b: &ReflexiveGraph, _k: &GraphHom) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
    /// `A ⊗ B → C` to `A → [B, C]`.
    fn curry(&self, _a: &ReflexiveGraph, _b: &ReflexiveGraph, _phi: &GraphHom) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
    fn uncurry(&self, _a: &ReflexiveGraph, _b: &ReflexiveGraph, _c: &ReflexiveGraph, _psi: &GraphHom) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
    fn left_internal_hom(&self, _a: &ReflexiveGraph, _c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        Err(Error::MissingClosure(self.name()))
    }
    fn left_internal_hom_map(&self, _a: &ReflexiveGraph, _k: &GraphHom) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
    /// `A ⊗ B → C` to `B → {A, C}`.
    fn curry_left(&self, _a: &ReflexiveGraph, _b: &ReflexiveGraph, _phi: &GraphHom) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
    fn uncurry_left(
        &self,
        _a: &ReflexiveGraph,
        _b: &ReflexiveGraph,
        _c: &ReflexiveGraph,
        _psi: &GraphHom,
    ) -> Result<GraphHom> {
        Err(Error::MissingClosure(self.name()))
    }
}

/// Keyed by fingerprints so lookups need no clones; each bucket holds the
/// graphs themselves to resolve collisions.
type Cache<V> = Mutex<FxHashMap<(u64, u64), Vec<(ReflexiveGraph, ReflexiveGraph, Arc<V>)>>>;

fn cached<V>(
    cache: &Cache<V>,
    key: (&ReflexiveGraph, &ReflexiveGraph),
    build: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    let hash = (key.0.fingerprint(), key.1.fingerprint());
    let find = |bucket: &[(ReflexiveGraph, ReflexiveGraph, Arc<V>)]| {
        bucket.iter().find(|(a, b, _)| a == key.0 && b == key.1).map(|(_, _, v)| v.clone())
    };
    if let Some(v) = cache.lock().expect("cache lock").get(&hash).and_then(|b| find(b)) {
        return Ok(v);
    }
    let value = Arc::new(build()?);
    let mut guard = cache.lock().expect("cache lock");
    let bucket = guard.entry(hash).or_default();
    if let Some(v) = find(bucket) {
        return Ok(v);
    }
    bucket.push((key.0.clone(), key.1.clone(), value.clone()));
    Ok(value)
}

/// The box or categorical product with canonical structure maps and the
/// swap-derived left closure.
pub struct ProductOracle {
    kind: ProductKind,
    mode: Mode,
    unit: ReflexiveGraph,
    tensors: Cache<Tensor>,
    exponentials: Cache<Exponential>,
}

impl ProductOracle {
    pub fn new(kind: ProductKind, mode: Mode) -> Self {
        ProductOracle {
            kind,
            mode,
            unit: make_path(0, mode),
            tensors: Mutex::default(),
            exponentials: Mutex::default(),
        }
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn tensor(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<Arc<Tensor>> {
        cached(&self.tensors, (a, b), || Tensor::new(self.kind, a, b))
    }

    pub fn exponential(&self, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<Arc<Exponential>> {
        cached(&self.exponentials, (b, c), || Exponential::new(self.kind, b, c))
    }
}

impl TensorOracle for ProductOracle {
    fn name(&self) -> String {
        self.kind.to_string()
    }

    fn mode(&self) -> Mode {
        self.mode
    }

    fn unit(&self) -> ReflexiveGraph {
        self.unit.clone()
    }

    fn tensor_ob(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        Ok(self.tensor(a, b)?.graph().clone())
    }

    fn tensor_hom(&self, f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
        tensor_hom_between(&*self.tensor(f.dom(), g.dom())?, &*self.tensor(f.cod(), g.cod())?, f, g)
    }

    fn associator(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<GraphHom> {
        let ab = self.tensor(a, b)?;
        let bc = self.tensor(b, c)?;
        let dom = self.tensor(ab.graph(), c)?;
        let cod = self.tensor(a, bc.graph())?;
        Ok(associator_between(&ab, &bc, &dom, &cod))
    }

    fn left_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        Ok(left_unitor_on(&*self.tensor(&self.unit, a)?))
    }

    fn right_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        Ok(right_unitor_on(&*self.tensor(a, &self.unit)?))
    }

    fn internal_hom(&self, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        Ok(self.exponential(b, c)?.graph().clone())
    }

    fn internal_hom_map(&self, b: &ReflexiveGraph, k: &GraphHom) -> Result<GraphHom> {
        self.exponential(b, k.dom())?.post_compose(&*self.exponential(b, k.cod())?, k)
    }

    fn curry(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, phi: &GraphHom) -> Result<GraphHom> {
        self.exponential(b, phi.cod())?.curry(&*self.tensor(a, b)?, phi)
    }

    fn uncurry(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph, psi: &GraphHom) -> Result<GraphHom> {
        self.exponential(b, c)?.uncurry(&*self.tensor(a, b)?, psi)
    }

    fn left_internal_hom(&self, a: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        self.internal_hom(a, c)
    }

    fn left_internal_hom_map(&self, a: &ReflexiveGraph, k: &GraphHom) -> Result<GraphHom> {
        self.internal_hom_map(a, k)
    }

    fn curry_left(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, phi: &GraphHom) -> Result<GraphHom> {
        let sw = swap_between(&*self.tensor(b, a)?, &*self.tensor(a, b)?);
        self.curry(b, a, &sw.then(phi)?)
    }

    fn uncurry_left(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph, psi: &GraphHom) -> Result<GraphHom> {
        let flat = self.uncurry(b, a, c, psi)?;
        swap_between(&*self.tensor(a, b)?, &*self.tensor(b, a)?).then(&flat)
    }
}

/// A built-in oracle with `tensor_ob(left, right)` replaced by another graph
/// on the same vertices. Every hom the inner oracle produces is retyped
/// through the replacement, so an inconsistent replacement shows up as
/// failing laws.
pub struct ModifiedOracle {
    inner: ProductOracle,
    left: ReflexiveGraph,
    right: ReflexiveGraph,
    replacement: ReflexiveGraph,
    label: String,
}

impl ModifiedOracle {
    pub fn new(
        inner: ProductOracle,
        left: ReflexiveGraph,
        right: ReflexiveGraph,
        replacement: ReflexiveGraph,
    ) -> Result<Self> {
        let original = inner.tensor_ob(&left, &right)?;
        if original.vertices() != replacement.vertices() || original.mode() != replacement.mode() {
            return Err(Error::ShapeMismatch("replacement must keep the tensor's vertices".into()));
        }
        let label = format!("{} (modified)", inner.name());
        Ok(ModifiedOracle { inner, left, right, replacement, label })
    }

    /// The built-in oracle with the edge `u ⇝ v` of `left ⊗ right` toggled.
    pub fn flip_edge(
        inner: ProductOracle,
        left: ReflexiveGraph,
        right: ReflexiveGraph,
        u: usize,
        v: usize,
    ) -> Result<Self> {
        let replacement = inner.tensor_ob(&left, &right)?.with_toggled_edge(u, v);
        let mut oracle = Self::new(inner, left, right, replacement)?;
        let t = oracle.replacement.clone();
        oracle.label = format!("{} with {}⇝{} toggled", oracle.inner.name(), t.label(u), t.label(v));
        Ok(oracle)
    }

    pub fn replacement(&self) -> &ReflexiveGraph {
        &self.replacement
    }

    fn inner_ob(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        self.inner.tensor_ob(a, b)
    }

    fn into_inner(&self, phi: &GraphHom, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<GraphHom> {
        phi.retype(self.inner_ob(a, b)?, phi.cod().clone())
    }
}

impl TensorOracle for ModifiedOracle {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn mode(&self) -> Mode {
        self.inner.mode()
    }

    fn unit(&self) -> ReflexiveGraph {
        self.inner.unit()
    }

    fn tensor_ob(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        if a == &self.left && b == &self.right {
            Ok(self.replacement.clone())
        } else {
            self.inner_ob(a, b)
        }
    }

    fn tensor_hom(&self, f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
        self.inner
            .tensor_hom(f, g)?
            .retype(self.tensor_ob(f.dom(), g.dom())?, self.tensor_ob(f.cod(), g.cod())?)
    }

    fn associator(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<GraphHom> {
        let dom = self.tensor_ob(&self.tensor_ob(a, b)?, c)?;
        let cod = self.tensor_ob(a, &self.tensor_ob(b, c)?)?;
        self.inner.associator(a, b, c)?.retype(dom, cod)
    }

    fn left_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        self.inner.left_unitor(a)?.retype(self.tensor_ob(&self.unit(), a)?, a.clone())
    }

    fn right_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        self.inner.right_unitor(a)?.retype(self.tensor_ob(a, &self.unit())?, a.clone())
    }

    fn internal_hom(&self, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        self.inner.internal_hom(b, c)
    }

    fn internal_hom_map(&self, b: &ReflexiveGraph, k: &GraphHom) -> Result<GraphHom> {
        self.inner.internal_hom_map(b, k)
    }

    fn curry(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, phi: &GraphHom) -> Result<GraphHom> {
        self.inner.curry(a, b, &self.into_inner(phi, a, b)?)
    }

    fn uncurry(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph, psi: &GraphHom) -> Result<GraphHom> {
        self.inner.uncurry(a, b, c, psi)?.retype(self.tensor_ob(a, b)?, c.clone())
    }

    fn left_internal_hom(&self, a: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        self.inner.left_internal_hom(a, c)
    }

    fn left_internal_hom_map(&self, a: &ReflexiveGraph, k: &GraphHom) -> Result<GraphHom> {
        self.inner.left_internal_hom_map(a, k)
    }

    fn curry_left(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, phi: &GraphHom) -> Result<GraphHom> {
        self.inner.curry_left(a, b, &self.into_inner(phi, a, b)?)
    }

    fn uncurry_left(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph, psi: &GraphHom) -> Result<GraphHom> {
        self.inner.uncurry_left(a, b, c, psi)?.retype(self.tensor_ob(a, b)?, c.clone())
    }
}
