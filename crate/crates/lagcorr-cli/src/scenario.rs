//! Scenario files and the small expression language for naming elements and correspondences.
//!
//! Elements are products `X*Y*...` of factors with an optional integer power `X^k`:
//! `I`, `S`, `F<n>` (the shear [[I, nI], [0, I]]), `T<n>` (its transpose), `Ga` (g_a with
//! a = 1 + omega), `Ga(p,q)` (a = p + q*omega), `Gsqrt` (a = sqrt D), or a scenario name.
//!
//! Correspondences are `graph(<element>)`, `model(<a>)` for the g_a model, the bare names
//! `Ga`, `Ga(p,q)`, `Gsqrt` (also models), `transpose(<corr>)`, `positions`, `momenta`,
//! `pol(<H>)` for the graph of a polarization, a scenario name, or any element expression
//! (read as its graph).

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde_json::Value;

use lagcorr::arith::{BaseRing, QuadElem};
use lagcorr::correspondence::{
    ga_model, graph, is_lagrangian, transpose, ParamCorrespondence, SymplecticAuto,
};
use lagcorr::heisenberg::{momenta, polarization_graph, positions};
use lagcorr::isogeny::HermitianMat;
use lagcorr::linalg::Mat;
use lagcorr::Error;

pub type Res<T> = std::result::Result<T, Error>;

fn bad(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub fn parse_ring(s: &str) -> Res<BaseRing> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("z") {
        return Ok(BaseRing::Integers);
    }
    let d = t.strip_prefix("D=").or_else(|| t.strip_prefix("d=")).unwrap_or(t);
    let d: i64 =
        d.parse().map_err(|_| bad(format!("ring '{s}': expected Z or D=<discriminant>")))?;
    BaseRing::quadratic(d)
}

/// Named objects plus the ambient ring and genus.
pub struct Context {
    pub ring: BaseRing,
    pub genus: usize,
    pub elements: BTreeMap<String, SymplecticAuto>,
    pub correspondences: BTreeMap<String, ParamCorrespondence>,
    pub hermitian: BTreeMap<String, HermitianMat>,
    pub tasks: Vec<Vec<String>>,
}

impl Context {
    pub fn new(ring: BaseRing, genus: usize) -> Self {
        Context {
            ring,
            genus,
            elements: BTreeMap::new(),
            correspondences: BTreeMap::new(),
            hermitian: BTreeMap::new(),
            tasks: vec![],
        }
    }

    /// Load a scenario document. Explicit ring and genus flags win over the file.
    pub fn from_scenario(doc: &Value, ring: Option<BaseRing>, genus: Option<usize>) -> Res<Self> {
        let obj = doc.as_object().ok_or_else(|| bad("scenario must be a JSON object"))?;
        let ring = match (ring, obj.get("ring")) {
            (Some(r), _) => r,
            (None, Some(Value::String(s))) => parse_ring(s)?,
            (None, Some(Value::Number(n))) => {
                BaseRing::quadratic(n.as_i64().ok_or_else(|| bad("ring"))?)?
            }
            (None, None) => BaseRing::Integers,
            (None, Some(v)) => return Err(bad(format!("ring: unexpected {v}"))),
        };
        let genus = match (genus, obj.get("genus")) {
            (Some(g), _) => g,
            (None, Some(v)) => v
                .as_u64()
                .filter(|&g| g > 0)
                .ok_or_else(|| bad("genus must be a positive integer"))?
                as usize,
            (None, None) => 1,
        };
        let mut cx = Context::new(ring, genus);
        if let Some(els) = obj.get("elements") {
            for (name, v) in els.as_object().ok_or_else(|| bad("elements must be an object"))? {
                let g = match v {
                    Value::String(expr) => cx.element(expr)?,
                    _ => SymplecticAuto::new(cx.matrix(v)?)?,
                };
                cx.elements.insert(name.clone(), g);
            }
        }
        if let Some(hs) = obj.get("hermitian") {
            for (name, v) in hs.as_object().ok_or_else(|| bad("hermitian must be an object"))? {
                let h = HermitianMat::new(cx.matrix(v)?)?;
                cx.hermitian.insert(name.clone(), h);
            }
        }
        if let Some(cs) = obj.get("correspondences") {
            for (name, v) in
                cs.as_object().ok_or_else(|| bad("correspondences must be an object"))?
            {
                let l = cx.correspondence_entry(v)?;
                cx.correspondences.insert(name.clone(), l);
            }
        }
        if let Some(ts) = obj.get("tasks") {
            for t in ts.as_array().ok_or_else(|| bad("tasks must be an array"))? {
                let argv = match t {
                    Value::String(s) => s.split_whitespace().map(String::from).collect(),
                    Value::Array(xs) => xs
                        .iter()
                        .map(|x| {
                            x.as_str()
                                .map(String::from)
                                .ok_or_else(|| bad("task arguments must be strings"))
                        })
                        .collect::<Res<Vec<_>>>()?,
                    _ => return Err(bad("a task is a string or an array of strings")),
                };
                cx.tasks.push(argv);
            }
        }
        Ok(cx)
    }

    fn correspondence_entry(&self, v: &Value) -> Res<ParamCorrespondence> {
        let l = match v {
            Value::String(expr) => self.correspondence(expr)?,
            Value::Object(o) => {
                if let Some(Value::String(g)) = o.get("graph") {
                    graph(&self.element(g)?)?
                } else if let Some(j) = o.get("j") {
                    let ga = o.get("genus_a").and_then(Value::as_u64).unwrap_or(self.genus as u64)
                        as usize;
                    let gb = o.get("genus_b").and_then(Value::as_u64).unwrap_or(self.genus as u64)
                        as usize;
                    ParamCorrespondence::from_matrix(ga, gb, self.matrix(j)?)?
                } else {
                    return Err(bad("correspondence object needs 'graph' or 'j'"));
                }
            }
            _ => ParamCorrespondence::from_matrix(self.genus, self.genus, self.matrix(v)?)?,
        };
        if !is_lagrangian(&l) {
            return Err(Error::Degenerate("correspondence is not Lagrangian".into()));
        }
        Ok(l)
    }

    pub fn scalar(&self, v: &Value) -> Res<QuadElem> {
        let r = self.ring;
        match v {
            Value::Number(n) => {
                let i = n.as_i64().ok_or_else(|| bad(format!("entry {n} is not an integer")))?;
                Ok(QuadElem::from_int(r, i))
            }
            Value::String(s) => Ok(QuadElem::from_rational(r, rational(s)?)),
            Value::Object(o) => {
                let part = |k: &str| match o.get(k) {
                    None => Ok(BigRational::from_integer(0.into())),
                    Some(Value::Number(n)) => Ok(BigRational::from_integer(
                        n.as_i64().ok_or_else(|| bad("entry is not an integer"))?.into(),
                    )),
                    Some(Value::String(s)) => rational(s),
                    Some(x) => Err(bad(format!("bad coordinate {x}"))),
                };
                let b = part("b")?;
                if !r.is_cm() && b != BigRational::from_integer(0.into()) {
                    return Err(Error::NotCM);
                }
                Ok(QuadElem::new(r, part("a")?, b))
            }
            other => Err(bad(format!("bad matrix entry {other}"))),
        }
    }

    /// A matrix given as an array of rows.
    pub fn matrix(&self, v: &Value) -> Res<Mat> {
        let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
        if rows.is_empty() {
            return Err(bad("empty matrix"));
        }
        let mut data = vec![];
        let mut ncols = None;
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
            if *ncols.get_or_insert(row.len()) != row.len() {
                return Err(bad("ragged matrix"));
            }
            for x in row {
                data.push(self.scalar(x)?);
            }
        }
        Ok(Mat::from_vec(self.ring, rows.len(), ncols.unwrap_or(0), data))
    }

    /// A Hermitian form: a scenario name, an integer d (meaning d*I), or a JSON matrix.
    pub fn hermitian_form(&self, s: &str) -> Res<HermitianMat> {
        let s = s.trim();
        if let Some(h) = self.hermitian.get(s) {
            return Ok(h.clone());
        }
        if let Ok(d) = s.parse::<i64>() {
            return HermitianMat::new(Mat::scalar(
                self.ring,
                self.genus,
                &QuadElem::from_int(self.ring, d),
            ));
        }
        let v: Value = serde_json::from_str(s).map_err(|_| bad(format!("unknown form '{s}'")))?;
        HermitianMat::new(self.matrix(&v)?)
    }

    fn a_param(&self, inner: Option<&str>) -> Res<QuadElem> {
        let r = self.ring;
        if !r.is_cm() {
            return Err(Error::NotCM);
        }
        match inner {
            None => Ok(&r.one() + &r.omega()),
            Some(args) => {
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(bad(format!("Ga({args}): expected two coordinates")));
                }
                Ok(QuadElem::new(r, rational(parts[0])?, rational(parts[1])?))
            }
        }
    }

    fn model_param(&self, s: &str) -> Res<Option<QuadElem>> {
        if s == "Ga" {
            return self.a_param(None).map(Some);
        }
        if s == "Gsqrt" {
            if !self.ring.is_cm() {
                return Err(Error::NotCM);
            }
            return Ok(Some(self.ring.sqrt_d()));
        }
        if let Some(inner) = s.strip_prefix("Ga(").and_then(|t| t.strip_suffix(')')) {
            return self.a_param(Some(inner)).map(Some);
        }
        Ok(None)
    }

    fn factor(&self, s: &str) -> Res<SymplecticAuto> {
        let (r, g) = (self.ring, self.genus);
        let (base, power) = match s.rsplit_once('^') {
            Some((b, p)) => (b, p.parse::<i64>().map_err(|_| bad(format!("bad power in '{s}'")))?),
            None => (s, 1),
        };
        let x = if let Some(x) = self.elements.get(base) {
            x.clone()
        } else if base == "I" {
            SymplecticAuto::identity(r, g)
        } else if base == "S" {
            SymplecticAuto::fourier(r, g)
        } else if let Some(a) = self.model_param(base)? {
            SymplecticAuto::g_a(&a, g)?
        } else if let Some(n) = base.strip_prefix('F').and_then(|n| n.parse().ok()) {
            SymplecticAuto::shear(r, g, n)
        } else if let Some(n) = base.strip_prefix('T').and_then(|n| n.parse().ok()) {
            SymplecticAuto::shear_t(r, g, n)
        } else {
            return Err(bad(format!("unknown element '{base}'")));
        };
        let mut out = SymplecticAuto::identity(r, g);
        let step = if power < 0 { x.inverse() } else { x };
        for _ in 0..power.unsigned_abs() {
            out = out.mul(&step);
        }
        Ok(out)
    }

    pub fn element(&self, expr: &str) -> Res<SymplecticAuto> {
        let mut out: Option<SymplecticAuto> = None;
        for f in split_top(expr, '*') {
            let x = self.factor(f.trim())?;
            out = Some(match out {
                None => x,
                Some(o) => o.mul(&x),
            });
        }
        out.ok_or_else(|| bad("empty element expression"))
    }

    pub fn correspondence(&self, expr: &str) -> Res<ParamCorrespondence> {
        let e = expr.trim();
        if let Some(l) = self.correspondences.get(e) {
            return Ok(l.clone());
        }
        let call = |name: &str| {
            e.strip_prefix(name).and_then(|t| t.strip_prefix('(')).and_then(|t| t.strip_suffix(')'))
        };
        if let Some(inner) = call("graph") {
            return graph(&self.element(inner)?);
        }
        if let Some(inner) = call("transpose") {
            return Ok(transpose(&self.correspondence(inner)?));
        }
        if let Some(inner) = call("model") {
            let a = self
                .model_param(inner.trim())?
                .ok_or_else(|| bad(format!("model({inner}): expected Ga, Ga(p,q) or Gsqrt")))?;
            return ga_model(&a, self.genus);
        }
        if let Some(inner) = call("pol") {
            return polarization_graph(&self.hermitian_form(inner)?);
        }
        match e {
            "positions" => return Ok(positions(self.ring, self.genus)),
            "momenta" => return Ok(momenta(self.ring, self.genus)),
            _ => {}
        }
        if let Some(a) = self.model_param(e)? {
            return ga_model(&a, self.genus);
        }
        graph(&self.element(e)?)
    }
}

pub fn rational(s: &str) -> Res<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| bad(format!("'{s}' is not a rational number")))
}

pub fn parse_orders(s: &str) -> Res<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad(format!("bad group order list '{s}'"))))
        .collect()
}

/// Generators written as "x1,x2,...;y1,y2,...".
pub fn parse_vectors(s: &str) -> Res<Vec<Vec<i64>>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_orders).collect()
}

/// Split on `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = vec![];
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
