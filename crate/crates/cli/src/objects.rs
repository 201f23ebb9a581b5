use std::path::Path;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rbskit::fincat::{validate_category, FinCat, RawCategory};
use rbskit::qkt::{build_filt_category, build_monoidal, q1_category, quillen_q};
use rbskit::rbs::{bgl_category, build_rbs, flag_poset, tits_building, TitsComplex};
use rbskit::ring::FiniteRing;
use rbskit::{Error, Guards, Result};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Object {
    Rbs,
    Poset,
    Tits,
    Bgl,
    Q,
    #[value(name = "mE", alias = "me")]
    ME,
}

#[derive(Args, Clone, Debug, Default)]
pub struct ObjectParams {
    /// Ring: F<q>, Z/<p^k>, ...
    #[arg(long)]
    pub ring: Option<String>,
    /// Field size; shorthand for --ring F<q>.
    #[arg(long)]
    pub q: Option<u32>,
    /// Rank (for q and mE: maximal dimension).
    #[arg(long)]
    pub n: Option<usize>,
    /// Total dimension cap for mE.
    #[arg(long)]
    pub cap: Option<usize>,
}

impl ObjectParams {
    pub fn ring_name(&self) -> Result<String> {
        match (&self.ring, self.q) {
            (Some(r), None) => Ok(r.clone()),
            (None, Some(q)) => Ok(format!("F{q}")),
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either --ring or --q, not both".into())),
            (None, None) => Err(Error::InvalidInput("missing --ring or --q".into())),
        }
    }

    fn ring(&self) -> Result<FiniteRing> {
        FiniteRing::from_str_spec(&self.ring_name()?)
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::InvalidInput("missing --n".into()))
    }

    fn field_size(&self) -> Result<u32> {
        let r = self.ring()?;
        if !r.is_field() {
            return Err(Error::InvalidInput(format!("{} is not a field", self.ring_name()?)));
        }
        Ok(r.size() as u32)
    }
}

/// What `homology` works on: a finite category, or a simplicial complex.
pub enum Space {
    Category(Arc<FinCat>),
    Tits(TitsComplex),
}

pub fn describe(object: Object, p: &ObjectParams) -> String {
    let r = p.ring_name().unwrap_or_default();
    let n = p.n.map(|n| n.to_string()).unwrap_or_default();
    match object {
        Object::Rbs => format!("RBS({r}^{n})"),
        Object::Poset => format!("flags({r}^{n})"),
        Object::Tits => format!("Tits({r}, {n})"),
        Object::Bgl => format!("BGL_{n}({r})"),
        Object::Q => format!("Q(Vect({r})≤{n})"),
        Object::ME => format!("M_E({r}, parts≤{n}, total≤{})", p.cap.map(|c| c.to_string()).unwrap_or_default()),
    }
}

fn cap(p: &ObjectParams, guards: &Guards) -> usize {
    p.cap.unwrap_or(guards.max_total_dim)
}

pub fn build_json(object: Object, p: &ObjectParams, guards: &Guards) -> Result<Value> {
    let v = match object {
        Object::Rbs => {
            let rbs = build_rbs(&p.ring()?, p.n()?, guards)?;
            json!({
                "object": "rbs",
                "rbs": rbs.export(),
                "category": rbs.cat.to_raw(),
            })
        }
        Object::Poset => {
            let (n, ring) = (p.n()?, p.ring()?);
            let (flags, poset) = flag_poset(&ring, n, guards)?;
            let order: Vec<[usize; 2]> = (0..poset.len())
                .flat_map(|a| (0..poset.len()).map(move |b| [a, b]))
                .filter(|&[a, b]| a != b && poset.leq(a, b))
                .collect();
            json!({
                "object": "poset",
                "ring": ring.spec().to_string(),
                "n": n,
                "flags": flags.iter().map(|f| f.label()).collect::<Vec<_>>(),
                "strict_order": order,
                "category": poset.to_category().to_raw(),
            })
        }
        Object::Tits => {
            let t = tits_building(p.field_size()?, p.n()?, guards)?;
            json!({
                "object": "tits",
                "faces": t.complex.faces,
                "summary": t.summary(),
            })
        }
        Object::Bgl => {
            let rbs = build_rbs(&p.ring()?, p.n()?, guards)?;
            let c = bgl_category(&rbs.setting);
            json!({
                "object": "bgl",
                "ring": rbs.ring().spec().to_string(),
                "n": rbs.rank(),
                "order": c.num_morphisms(),
                "category": c.to_raw(),
            })
        }
        Object::Q => {
            let e = build_filt_category(p.field_size()?, p.n()?, guards)?;
            let q = quillen_q(&e, guards)?;
            json!({
                "object": "q",
                "q": e.q,
                "max_dim": e.max_dim,
                "exact_category_axioms": e.axioms,
                "category": q.cat.to_raw(),
            })
        }
        Object::ME => {
            let me = Arc::new(build_monoidal(&p.ring()?, p.n()?, cap(p, guards), guards)?);
            let laws = me.check()?;
            let q1 = q1_category(me.clone())?;
            json!({
                "object": "mE",
                "ring": me.ring.spec().to_string(),
                "max_part": me.max_dim,
                "cap": me.cap,
                "monoidal_laws": laws,
                "q1": q1.certificate(),
                "category": me.cat.to_raw(),
                "q1_category": q1.cat.to_raw(),
            })
        }
    };
    Ok(v)
}

pub fn build_space(object: Object, p: &ObjectParams, guards: &Guards) -> Result<Space> {
    Ok(Space::Category(Arc::new(match object {
        Object::Rbs => return Ok(Space::Category(build_rbs(&p.ring()?, p.n()?, guards)?.cat)),
        Object::Poset => flag_poset(&p.ring()?, p.n()?, guards)?.1.to_category(),
        Object::Tits => return Ok(Space::Tits(tits_building(p.field_size()?, p.n()?, guards)?)),
        Object::Bgl => bgl_category(&build_rbs(&p.ring()?, p.n()?, guards)?.setting),
        Object::Q => {
            let e = build_filt_category(p.field_size()?, p.n()?, guards)?;
            return Ok(Space::Category(quillen_q(&e, guards)?.cat));
        }
        Object::ME => {
            let me = build_monoidal(&p.ring()?, p.n()?, cap(p, guards), guards)?;
            return Ok(Space::Category(me.cat));
        }
    })))
}

/// Reads a category exported by `build`, or a bare category in the
/// `objects`/`morphisms`/`identities`/`composition` schema.
pub fn load_category(path: &Path) -> Result<Arc<FinCat>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let mut v: Value = serde_json::from_str(&text)?;
    if let Some(c) = v.get_mut("category") {
        v = c.take();
    }
    let raw: RawCategory = serde_json::from_value(v)?;
    Ok(Arc::new(validate_category(&raw)?))
}
