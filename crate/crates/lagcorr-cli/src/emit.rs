//! Exact JSON encodings and the CSV flattening of command outputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use lagcorr::arith::{BaseRing, QuadElem};
use lagcorr::correspondence::SymplecticAuto;
use lagcorr::linalg::Mat;

/// Integers stay JSON numbers while they fit in i64, and become decimal strings beyond.
pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Rationals are always strings: "p/q", or "p" when the denominator is 1.
pub fn rat(r: &BigRational) -> Value {
    json!(r.to_string())
}

pub fn omega_label(ring: BaseRing) -> String {
    match ring.discriminant() {
        None => "1".into(),
        Some(d) if d.rem_euclid(4) == 1 => format!("(1+sqrt({d}))/2"),
        Some(d) => format!("sqrt({d})"),
    }
}

/// Over Z a bare rational; over a CM order {"a", "b", "omega"} for a + b*omega.
pub fn quad(x: &QuadElem) -> Value {
    if x.ring().is_cm() {
        json!({"a": rat(x.a()), "b": rat(x.b()), "omega": omega_label(x.ring())})
    } else {
        rat(x.a())
    }
}

pub fn mat(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(quad).collect())).collect())
}

pub fn sp(g: &SymplecticAuto) -> Value {
    mat(g.matrix())
}

pub enum Format {
    Json,
    Csv,
}

/// Render a command result. Objects holding a "rows" array become one CSV record per row;
/// any other object becomes a single record. Nested values are written as compact JSON.
pub fn render(v: &Value, format: &Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values are serializable") + "\n",
        Format::Csv => csv_of(v),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_of(v: &Value) -> String {
    let rows: Vec<Map<String, Value>> = match v {
        Value::Object(o) => match o.get("rows") {
            Some(Value::Array(rs)) if rs.iter().all(Value::is_object) => {
                rs.iter().map(|r| r.as_object().cloned().unwrap_or_default()).collect()
            }
            _ => vec![o.clone()],
        },
        Value::Array(rs) => rs.iter().map(|r| r.as_object().cloned().unwrap_or_default()).collect(),
        other => vec![Map::from_iter([("value".to_string(), other.clone())])],
    };
    let mut header: Vec<String> = vec![];
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(&header).expect("in-memory write");
    for r in &rows {
        w.write_record(header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        assert_eq!(int(&BigInt::from(-3)), json!(-3));
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(int(&big), json!(big.to_string()));
        assert_eq!(rat(&BigRational::new(2.into(), (-4).into())), json!("-1/2"));
        let r = BaseRing::quadratic(-3).unwrap();
        assert_eq!(
            quad(&QuadElem::from_ints(r, 1, 2)),
            json!({"a": "1", "b": "2", "omega": "(1+sqrt(-3))/2"})
        );
    }

    #[test]
    fn csv_rows_and_quoting() {
        let v = json!({"rows": [{"g1": "S", "lambda": -1}, {"g1": "F1,x", "lambda": 0}]});
        assert_eq!(render(&v, &Format::Csv), "g1,lambda\nS,-1\n\"F1,x\",0\n");
        let v = json!({"q": 4, "pi": [[1, 0], [0, 1]]});
        assert_eq!(render(&v, &Format::Csv), "pi,q\n\"[[1,0],[0,1]]\",4\n");
    }
}
