//! JSON encoding of core terms and types.
//!
//! ```text
//! T  = {"var":N} | {"lam":{"ann":TY|null,"body":T}} | {"app":{"fun":T,"arg":T}}
//!    | {"bool":true|false} | {"if":{"cond":T,"then":T,"else":T}}
//! TY = "Bool" | {"arrow":[TY,TY]}
//! ```

use serde_json::{json, Map, Value};
use stlc_core::{Term, Ty};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid JSON term: {0}")]
pub struct JsonError(String);

fn bad<T>(what: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError(what.into()))
}

pub fn ty_to_json(ty: &Ty) -> Value {
    match ty {
        Ty::Bool => json!("Bool"),
        Ty::Arrow(a, b) => json!({ "arrow": [ty_to_json(a), ty_to_json(b)] }),
    }
}

pub fn term_to_json(term: &Term) -> Value {
    match term {
        Term::Var(i) => json!({ "var": i }),
        Term::Lam(ann, body) => json!({
            "lam": { "ann": ann.as_ref().map(ty_to_json), "body": term_to_json(body) }
        }),
        Term::App(f, a) => json!({ "app": { "fun": term_to_json(f), "arg": term_to_json(a) } }),
        Term::True => json!({ "bool": true }),
        Term::False => json!({ "bool": false }),
        Term::If(c, t, e) => json!({
            "if": { "cond": term_to_json(c), "then": term_to_json(t), "else": term_to_json(e) }
        }),
    }
}

/// The single `key: value` entry of a tagged object.
fn tagged(value: &Value) -> Result<(&str, &Value), JsonError> {
    match value.as_object() {
        Some(obj) if obj.len() == 1 => {
            let (k, v) = obj.iter().next().unwrap();
            Ok((k.as_str(), v))
        }
        _ => bad(format!("expected an object with one key, found {value}")),
    }
}

fn fields<'a>(value: &'a Value, names: &[&str]) -> Result<Vec<&'a Value>, JsonError> {
    let Some(obj): Option<&Map<String, Value>> = value.as_object() else {
        return bad(format!("expected an object, found {value}"));
    };
    if obj.len() != names.len() {
        return bad(format!("expected fields {names:?}, found {value}"));
    }
    names
        .iter()
        .map(|name| match obj.get(*name) {
            Some(v) => Ok(v),
            None => bad(format!("missing field `{name}` in {value}")),
        })
        .collect()
}

pub fn ty_from_json(value: &Value) -> Result<Ty, JsonError> {
    if value.as_str() == Some("Bool") {
        return Ok(Ty::Bool);
    }
    match tagged(value)? {
        ("arrow", Value::Array(parts)) if parts.len() == 2 => Ok(Ty::arrow(
            ty_from_json(&parts[0])?,
            ty_from_json(&parts[1])?,
        )),
        _ => bad(format!("not a type: {value}")),
    }
}

pub fn term_from_json(value: &Value) -> Result<Term, JsonError> {
    let (tag, inner) = tagged(value)?;
    match tag {
        "var" => match inner.as_u64().and_then(|n| usize::try_from(n).ok()) {
            Some(i) => Ok(Term::Var(i)),
            None => bad(format!("bad variable index {inner}")),
        },
        "bool" => match inner.as_bool() {
            Some(b) => Ok(Term::bool(b)),
            None => bad(format!("bad boolean {inner}")),
        },
        "lam" => {
            let f = fields(inner, &["ann", "body"])?;
            let ann = match f[0] {
                Value::Null => None,
                ty => Some(ty_from_json(ty)?),
            };
            Ok(Term::lam(ann, term_from_json(f[1])?))
        }
        "app" => {
            let f = fields(inner, &["fun", "arg"])?;
            Ok(Term::app(term_from_json(f[0])?, term_from_json(f[1])?))
        }
        "if" => {
            let f = fields(inner, &["cond", "then", "else"])?;
            Ok(Term::ite(
                term_from_json(f[0])?,
                term_from_json(f[1])?,
                term_from_json(f[2])?,
            ))
        }
        _ => bad(format!("unknown constructor `{tag}`")),
    }
}

pub fn parse_term_json(src: &str) -> Result<Term, JsonError> {
    let value: Value = serde_json::from_str(src).map_err(|err| JsonError(err.to_string()))?;
    term_from_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_the_documented_shapes() {
        let id = Term::lam(Some(Ty::Bool), Term::Var(0));
        assert_eq!(
            term_to_json(&id).to_string(),
            r#"{"lam":{"ann":"Bool","body":{"var":0}}}"#
        );
        let t = Term::ite(
            Term::True,
            Term::abs(Term::False),
            Term::app(Term::Var(1), Term::Var(0)),
        );
        assert_eq!(
            term_to_json(&t).to_string(),
            r#"{"if":{"cond":{"bool":true},"then":{"lam":{"ann":null,"body":{"bool":false}}},"else":{"app":{"fun":{"var":1},"arg":{"var":0}}}}}"#
        );
        let ty = Ty::arrow(Ty::arrow(Ty::Bool, Ty::Bool), Ty::Bool);
        assert_eq!(
            ty_to_json(&ty).to_string(),
            r#"{"arrow":[{"arrow":["Bool","Bool"]},"Bool"]}"#
        );
    }

    #[test]
    fn decodes_what_it_encodes() {
        let t = Term::app(
            Term::lam(Some(Ty::arrow(Ty::Bool, Ty::Bool)), Term::Var(0)),
            Term::abs(Term::ite(Term::Var(0), Term::False, Term::True)),
        );
        assert_eq!(term_from_json(&term_to_json(&t)), Ok(t));
    }

    #[test]
    fn rejects_malformed_input() {
        for src in [
            r#"{"var":-1}"#,
            r#"{"bool":1}"#,
            r#"{"lam":{"body":{"var":0}}}"#,
            r#"{"app":{"fun":{"var":0}}}"#,
            r#"{"var":0,"bool":true}"#,
            r#"{"lam":{"ann":"Int","body":{"var":0}}}"#,
            r#"[1]"#,
            r#"{"#,
        ] {
            assert!(parse_term_json(src).is_err(), "{src}");
        }
    }
}
