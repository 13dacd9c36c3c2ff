use std::fmt;

use super::{kernel_test, multiply_cores, psi};
use crate::algebra::{core, core_states, is_state_injective, product, state_images, sync_length, Injectivity};
use crate::error::{Error, Result};
use crate::transducer::{CoreTransducer, FiniteTransducer, DEFAULT_ROUNDS};
use crate::vgroup::{lazy_core, InverseSource, LazyTransducer, Piece, PiecewiseSource};
use crate::words::{MultiWord, PrefixCode};
use crate::Budget;

/// A homeomorphism whose core is a given product of factors, in the form
/// `(w·x) ↦ φ(a_w)·(λ(q,w) − a_w)·f_{δ(q,w)}(x)` over all grid words `w`
/// of depth `depth`.
#[derive(Debug, Clone)]
pub struct Realization {
    /// Core of the product of the factors.
    pub product: CoreTransducer,
    /// The state of `product` the construction starts from.
    pub state: String,
    /// Disjoint cones making up the image of that state.
    pub image: Vec<MultiWord>,
    /// A complete prefix code of the same size; `image[i] ↦ code[i]`.
    pub code: Vec<MultiWord>,
    pub depth: usize,
    /// `(w, output prefix, state name)` for every grid word `w`.
    pub pieces: Vec<(MultiWord, MultiWord, String)>,
    /// Core recovered by lazy exploration of the homeomorphism.
    pub recovered: CoreTransducer,
}

pub fn realize_kernel_element(ts: &[CoreTransducer], budget: Budget) -> Result<Realization> {
    if !kernel_test(ts, budget)? {
        return Err(Error::NotInKernel);
    }
    let inners: Vec<FiniteTransducer> = ts.iter().map(|t| t.inner().clone()).collect();
    let prod = core(&product(&inners)?, budget.kmax)?;
    let pt = prod.inner();
    let p = pt.params()?;
    let images = state_images(pt, budget.depth)?;
    let q = (0..pt.state_count())
        .min_by(|&a, &b| images[a].cone_count().cmp(&images[b].cone_count()).then(pt.name(a).cmp(pt.name(b))))
        .expect("cores have states");
    let image = images[q].cones();

    // Depth at which every grid word's output lands inside one image cone.
    let mut depth = None;
    for k in 0..=budget.depth {
        let cells = p.grid_count().checked_pow(k as u32).unwrap_or(usize::MAX);
        if cells > budget.states.max(1) * 64 {
            break;
        }
        let words = p.words_of_depth(k);
        if words.iter().all(|w| {
            let out = pt.read_unchecked(q, w).1;
            image.iter().any(|a| a.is_prefix_of(&out))
        }) {
            depth = Some((k, words));
            break;
        }
    }
    let (depth, words) = depth.ok_or_else(|| {
        Error::BudgetExceeded(format!("outputs of {} never settle into single image cones", pt.name(q)))
    })?;

    let code = PrefixCode::by_splitting(p, image.len())?.members().to_vec();
    let mut pieces = Vec::with_capacity(words.len());
    for w in words {
        let (r, out) = pt.read_unchecked(q, &w);
        let (idx, a) = image.iter().enumerate().find(|(_, a)| a.is_prefix_of(&out)).expect("depth was chosen so");
        let ran = code[idx].concat(&out.subtract(a)?)?;
        pieces.push(Piece { dom: w, ran, state: r });
    }
    let listing = pieces.iter().map(|x| (x.dom.clone(), x.ran.clone(), pt.name(x.state).to_string())).collect();
    let source = PiecewiseSource::new(pt.clone(), pieces)?;
    let mut lazy = LazyTransducer::new(source, budget.states)?;
    let recovered = lazy_core(&mut lazy, budget)?;
    if recovered != prod {
        return Err(Error::VerificationFailed(format!(
            "recovered core has {} states, expected {}",
            recovered.state_count(),
            prod.state_count()
        )));
    }
    Ok(Realization {
        state: pt.name(q).to_string(),
        product: prod,
        image,
        code,
        depth,
        pieces: listing,
        recovered,
    })
}

/// Inverts a core by lazily exploring the inverse of one state function on a
/// cone of its image; verified by multiplying back in both orders.
pub fn invert_core(t: &CoreTransducer, budget: Budget) -> Result<CoreTransducer> {
    let inner = t.inner();
    inner.params()?;
    for q in 0..inner.state_count() {
        if let Injectivity::NotInjective { first, second, .. } = is_state_injective(inner, q, budget.states)? {
            return Err(Error::NotInvertible(format!(
                "state {} sends {first} and {second} to comparable outputs",
                inner.name(q)
            )));
        }
    }
    let q = (0..inner.state_count()).min_by_key(|&s| inner.name(s)).expect("cores have states");
    let source = InverseSource::at_state(inner.clone(), q, budget.depth)?;
    let mut lazy = LazyTransducer::new(source, budget.states)?;
    let inv = lazy_core(&mut lazy, budget)?;
    if !multiply_cores(t, &inv, budget)?.is_identity() || !multiply_cores(&inv, t, budget)?.is_identity() {
        return Err(Error::NotInvertible("candidate inverse does not multiply to the identity".into()));
    }
    Ok(inv)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub clauses: Vec<Clause>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.clauses.iter().all(|c| c.ok)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.ok).map(|c| c.name).collect()
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, if c.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", c.detail)
            })?;
        }
        write!(f, "{}", if self.is_member() { "member" } else { "not a member" })
    }
}

/// Checks each clause of the characterization of cores of
/// homeomorphisms: complete response and minimality, synchronization,
/// being its own core, injective states with clopen images, invertibility,
/// and (for `d > 1`) a well-defined coordinate permutation.
pub fn o_membership(t: &FiniteTransducer, budget: Budget) -> Result<MembershipReport> {
    t.params()?;
    let t = t.clone().with_initial(None);
    let mut clauses: Vec<Clause> = Vec::new();
    fn record(clauses: &mut Vec<Clause>, name: &'static str, r: std::result::Result<(), String>) -> bool {
        let ok = r.is_ok();
        clauses.push(Clause { name, ok, detail: r.err().unwrap_or_default() });
        ok
    }
    let response = match t.response_offsets(DEFAULT_ROUNDS) {
        Ok(l) => match l.iter().position(|x| !x.is_empty()) {
            None => Ok(()),
            Some(q) => Err(format!("state {} always writes {}", t.name(q), l[q])),
        },
        Err(e) => Err(e.to_string()),
    };
    let responsive = record(&mut clauses, "complete response", response);
    let m = t.minimize().state_count();
    record(&mut clauses,
        "minimal",
        if m == t.state_count() { Ok(()) } else { Err(format!("{} states reduce to {m}", t.state_count())) },
    );
    let synced = record(&mut clauses, "synchronizing", sync_length(&t, budget.kmax).map(|_| ()).map_err(|e| e.to_string()));
    if synced {
        let (_, states) = core_states(&t, budget.kmax)?;
        let missing: Vec<&str> = (0..t.state_count()).filter(|q| !states.contains(q)).map(|q| t.name(q)).collect();
        record(&mut clauses, "own core", if missing.is_empty() { Ok(()) } else { Err(format!("outside: {}", missing.join(" "))) });
    } else {
        record(&mut clauses, "own core", Err("not synchronizing".into()));
    }
    let mut injective = Ok(());
    for q in 0..t.state_count() {
        match is_state_injective(&t, q, budget.states) {
            Ok(Injectivity::Injective) => {}
            Ok(Injectivity::NotInjective { first, second, .. }) => {
                injective = Err(format!("state {}: {first} and {second}", t.name(q)));
                break;
            }
            Err(e) => {
                injective = Err(e.to_string());
                break;
            }
        }
    }
    let inj = record(&mut clauses, "injective", injective);
    let clopen = record(&mut clauses, "clopen", state_images(&t, budget.depth).map(|_| ()).map_err(|e| e.to_string()));
    let psi_ok = if t.domain().d > 1 {
        let c = CoreTransducer::new_unchecked(t.clone(), 0);
        record(&mut clauses, "psi", psi(&c).map(|_| ()).map_err(|e| e.to_string()))
    } else {
        true
    };
    let core_ok = clauses.iter().all(|c| c.ok);
    let invertible = if core_ok && responsive && inj && clopen && psi_ok {
        match CoreTransducer::validate(t.clone(), budget.kmax) {
            Ok(c) => invert_core(&c, budget).map(|_| ()).map_err(|e| e.to_string()),
            Err(e) => Err(e.to_string()),
        }
    } else {
        Err("not attempted".into())
    };
    clauses.push(Clause { name: "invertible", ok: invertible.is_ok(), detail: invertible.err().unwrap_or_default() });
    Ok(MembershipReport { clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transducer::RawTransducer;
    use crate::words::Params;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn invert_examples() {
        let s = core(&fixtures::swap_zero_double_zero(), 8).unwrap();
        assert_eq!(invert_core(&s, b()).unwrap(), s);
        let cs = core(&fixtures::coordinate_swap(2), 8).unwrap();
        assert_eq!(invert_core(&cs, b()).unwrap(), cs);
        let id = CoreTransducer::identity(Params::new(3, 1).unwrap());
        assert_eq!(invert_core(&id, b()).unwrap(), id);
    }

    #[test]
    fn realize_identity_and_product_figure() {
        let p = Params::new(2, 1).unwrap();
        let id = CoreTransducer::identity(p);
        let r = realize_kernel_element(&[id.clone(), id.clone()], b()).unwrap();
        assert!(r.recovered.is_identity());
        let s = core(&fixtures::swap_zero_double_zero(), 8).unwrap();
        let r = realize_kernel_element(&[s, id], b()).unwrap();
        assert_eq!(r.recovered, core(&fixtures::product_figure(), 8).unwrap());
    }

    #[test]
    fn membership() {
        let r = o_membership(&fixtures::swap_zero_double_zero(), b()).unwrap();
        assert!(r.is_member(), "{r}");
        let p = Params::new(2, 1).unwrap();
        assert!(o_membership(&FiniteTransducer::identity(p), b()).unwrap().is_member());
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "0").unwrap();
        raw.set_named("q", 0, 1, "q", "0").unwrap();
        let r = o_membership(&raw.validate().unwrap(), b()).unwrap();
        assert!(r.failed().contains(&"injective"));
    }
}
