//! JSON forms of algebra elements, points, curves and sampled plane curves.
//! Scalars travel as strings (`"p/q"` or shortest round-trip decimals).

use serde_json::{json, Map, Value};

use crate::algebra2d::{AlgebraKind, A2};
use crate::error::{Error, Result};
use crate::grassmann::RP5Vec;
use crate::proj_plane::PointA;
use crate::ruled::{CurveA, PolyA};
use crate::scalar::Scalar;

fn bad(what: &str) -> Error {
    Error::Parse(what.to_string())
}

fn scalar<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::decode(s),
        Value::Number(n) => S::decode(&n.to_string()),
        _ => Err(bad("expected a number or numeric string")),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be an object")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn kind_of(v: &Value) -> Result<AlgebraKind> {
    field(object(v, "document")?, "kind")?
        .as_str()
        .ok_or_else(|| bad("\"kind\" must be a string"))?
        .parse()
}

pub fn encode_a2<S: Scalar>(a: &A2<S>) -> Value {
    json!({"kind": a.kind, "x": a.x.encode(), "y": a.y.encode()})
}

/// Accepts `{"x", "y"}` with an optional matching `"kind"`, or `"x,y"`.
pub fn decode_a2<S: Scalar>(v: &Value, kind: AlgebraKind) -> Result<A2<S>> {
    if let Some(s) = v.as_str() {
        return parse_pair(s, kind);
    }
    let obj = object(v, "algebra element")?;
    if let Some(k) = obj.get("kind") {
        let k: AlgebraKind = k
            .as_str()
            .ok_or_else(|| bad("\"kind\" must be a string"))?
            .parse()?;
        if k != kind {
            return Err(Error::Parse(format!(
                "element of {k} where {kind} was expected"
            )));
        }
    }
    Ok(A2::new(
        kind,
        scalar(field(obj, "x")?)?,
        scalar(field(obj, "y")?)?,
    ))
}

/// `"x,y"` as on the command line.
pub fn parse_pair<S: Scalar>(s: &str, kind: AlgebraKind) -> Result<A2<S>> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected x,y but got {s:?}")))?;
    Ok(A2::new(kind, S::decode(x)?, S::decode(y)?))
}

pub fn encode_point<S: Scalar>(p: &PointA<S>) -> Value {
    json!({
        "kind": p.kind(),
        "coords": p.coords().iter().map(encode_a2).collect::<Vec<_>>(),
    })
}

pub fn decode_point<S: Scalar>(v: &Value) -> Result<PointA<S>> {
    let kind = kind_of(v)?;
    let coords = array(field(object(v, "point")?, "coords")?, "\"coords\"")?;
    let c: Vec<A2<S>> = coords
        .iter()
        .map(|c| decode_a2(c, kind))
        .collect::<Result<_>>()?;
    let c: [A2<S>; 3] = c
        .try_into()
        .map_err(|_| bad("a point has three coordinates"))?;
    PointA::new(c)
}

pub fn encode_curve<S: Scalar>(c: &CurveA<S>) -> Value {
    let comp = |i: usize| {
        c.components()[i]
            .coeffs()
            .iter()
            .map(encode_a2)
            .collect::<Vec<_>>()
    };
    let mut coeffs = json!({"F1": comp(1), "F2": comp(2)});
    if !c.is_affine() {
        coeffs["F0"] = Value::Array(comp(0));
    }
    json!({"kind": c.kind(), "degree": c.degree(), "coeffs": coeffs})
}

/// Curve document; `F0` defaults to the constant 1 and `degree` must match
/// the coefficients.
pub fn decode_curve<S: Scalar>(v: &Value) -> Result<CurveA<S>> {
    let kind = kind_of(v)?;
    let obj = object(v, "curve")?;
    let coeffs = object(field(obj, "coeffs")?, "\"coeffs\"")?;
    if let Some(k) = coeffs
        .keys()
        .find(|k| !["F0", "F1", "F2"].contains(&k.as_str()))
    {
        return Err(Error::Parse(format!("unknown component {k:?}")));
    }
    let poly = |key: &str| -> Result<PolyA<S>> {
        let list = array(field(coeffs, key)?, key)?;
        PolyA::new(
            kind,
            list.iter()
                .map(|c| decode_a2(c, kind))
                .collect::<Result<_>>()?,
        )
    };
    let f0 = match coeffs.get("F0") {
        Some(_) => poly("F0")?,
        None => PolyA::constant(A2::one(kind)),
    };
    let curve = CurveA::new([f0, poly("F1")?, poly("F2")?])?;
    let degree = field(obj, "degree")?
        .as_u64()
        .ok_or_else(|| bad("\"degree\" must be a non-negative integer"))?;
    if degree != curve.degree() as u64 {
        return Err(Error::Parse(format!(
            "declared degree {degree} but the coefficients have degree {}",
            curve.degree()
        )));
    }
    Ok(curve)
}

pub fn encode_rp5<S: Scalar>(v: &RP5Vec<S>) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.encode())).collect())
}

/// A sampled curve in `RP⁵`: an array of 6-vectors or `null` for missing
/// samples.
pub fn decode_rp5_curve<S: Scalar>(v: &Value) -> Result<Vec<Option<RP5Vec<S>>>> {
    array(v, "sampled curve")?
        .iter()
        .map(|p| {
            if p.is_null() {
                return Ok(None);
            }
            let xs: Vec<S> = array(p, "point of RP5")?
                .iter()
                .map(scalar)
                .collect::<Result<_>>()?;
            let xs: RP5Vec<S> = xs
                .try_into()
                .map_err(|_| bad("points of RP5 have six coordinates"))?;
            Ok(Some(xs))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn a2_round_trip() {
        let a = A2::<Q>::new(AlgebraKind::Dual, Q::ratio(3, 2), Q::ratio(-1, 1));
        let v = encode_a2(&a);
        assert_eq!(v, json!({"kind": "dual", "x": "3/2", "y": "-1"}));
        assert_eq!(decode_a2::<Q>(&v, AlgebraKind::Dual).unwrap(), a);
        assert!(decode_a2::<Q>(&v, AlgebraKind::Double).is_err());
        assert_eq!(
            parse_pair::<Q>("0,1", AlgebraKind::Dual).unwrap(),
            A2::from_ints(AlgebraKind::Dual, 0, 1)
        );
        assert!(parse_pair::<Q>("0;1", AlgebraKind::Dual).is_err());
    }

    #[test]
    fn point_round_trip() {
        let p = PointA::<Q>::from_ints(AlgebraKind::Double, [(1, 0), (2, 1), (0, 3)]).unwrap();
        assert_eq!(decode_point::<Q>(&encode_point(&p)).unwrap(), p);
    }

    #[test]
    fn curve_round_trip() {
        let c = CurveA::<Q>::affine(
            PolyA::from_ints(AlgebraKind::Complex, &[(0, 0), (1, 0)]),
            PolyA::from_ints(AlgebraKind::Complex, &[(0, 0), (0, 0), (1, 0)]),
        )
        .unwrap();
        let v = encode_curve(&c);
        assert_eq!(v["degree"], 2);
        assert!(v["coeffs"].get("F0").is_none());
        assert_eq!(decode_curve::<Q>(&v).unwrap(), c);
        let f: CurveA<f64> = decode_curve(&v).unwrap();
        assert_eq!(f.degree(), 2);

        let mut wrong = v.clone();
        wrong["degree"] = json!(3);
        assert!(matches!(decode_curve::<Q>(&wrong), Err(Error::Parse(_))));
        let mut extra = v;
        extra["coeffs"]["F3"] = json!([]);
        assert!(decode_curve::<Q>(&extra).is_err());
    }

    #[test]
    fn sampled_curves() {
        let v = json!([["1", "0", "0", "0", "0", "0"], null, [1, 2, 3, 4, 5, "6/7"]]);
        let c: Vec<Option<RP5Vec<Q>>> = decode_rp5_curve(&v).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c[1].is_none());
        assert_eq!(c[2].as_ref().unwrap()[5], Q::ratio(6, 7));
        assert!(decode_rp5_curve::<Q>(&json!([["1"]])).is_err());
    }
}
