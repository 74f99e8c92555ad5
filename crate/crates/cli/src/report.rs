//! Deterministic JSON reports. Object keys are sorted and rationals are
//! strings, so equal inputs give byte-identical output.

use abmod_core::{
    BernsteinPoly, Lattice, PoleReport, Rational, RationalPolynomial, Series, SeriesMatrix,
    SpectralClass, SubModuleResult,
};
use serde_json::{json, Value};

/// Outcome class of a command, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub precision: Value,
    pub result: Value,
    pub caveats: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "precision": self.precision,
            "result": self.result,
            "caveats": self.caveats,
            "status": self.status.as_str(),
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn series(s: &Series) -> Value {
    Value::String(s.to_string())
}

pub fn vector(v: &[Series]) -> Value {
    Value::Array(v.iter().map(series).collect())
}

pub fn series_matrix(m: &SeriesMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

/// Coefficients from the constant term up, plus the human-readable form.
pub fn polynomial(p: &RationalPolynomial) -> Value {
    json!({
        "coefficients": p.coeffs().iter().map(rational).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn bernstein(b: &BernsteinPoly) -> Value {
    json!({
        "polynomial": polynomial(&b.poly),
        "factors": b.factorization.iter().map(|(f, m)| json!({
            "factor": polynomial(f),
            "multiplicity": m,
        })).collect::<Vec<_>>(),
        "rational_roots": b.rational_roots.iter().map(|(r, m)| json!({
            "root": rational(r),
            "multiplicity": m,
        })).collect::<Vec<_>>(),
        "irreducibility_certified": b.irreducibility_certified,
    })
}

/// Canonical generators: the lattice is `b^shift` times the column span.
pub fn lattice(l: &Lattice) -> Value {
    json!({
        "shift": l.shift(),
        "generators": series_matrix(&l.generator_matrix()),
        "index_valuation": l.index_valuation(),
    })
}

pub fn submodule(r: &SubModuleResult) -> Value {
    json!({
        "lattice": lattice(&r.lattice),
        "a_matrix": series_matrix(r.module.a_matrix()),
        "iterations": r.iterations,
        "identity": r.is_identity(),
    })
}

pub fn spectral_class(c: &SpectralClass) -> Value {
    match c {
        SpectralClass::Rational {
            representative,
            roots,
        } => json!({
            "kind": "rational",
            "representative": rational(representative),
            "roots": roots.iter().map(|(r, m)| json!({"root": rational(r), "multiplicity": m})).collect::<Vec<_>>(),
        }),
        SpectralClass::Symbolic { members } => json!({
            "kind": "symbolic",
            "members": members.iter().map(|(f, mult, shift)| json!({
                "factor": polynomial(f),
                "multiplicity": mult,
                "shift": shift,
            })).collect::<Vec<_>>(),
        }),
    }
}

pub fn poles(r: &PoleReport) -> Value {
    json!({
        "predictions": r.predictions.iter().map(|p| json!({
            "class": rational(&p.class_rep),
            "alpha": rational(&p.alpha),
            "d": p.d,
            "pole": rational(&p.pole_location),
            "order_at_least": p.pole_order_lower_bound,
        })).collect::<Vec<_>>(),
        "symbolic_classes": r.symbolic_classes.iter().map(spectral_class).collect::<Vec<_>>(),
    })
}
