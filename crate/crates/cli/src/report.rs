//! Rendering of check reports and certificates as text or JSON.

use std::fmt::Write;

use newton_strata::{Certificate, SlopeOrigin};

pub struct QueryReport {
    pub decision: bool,
    pub certificate: Option<Certificate>,
    pub b: String,
    pub mu: String,
    pub b_prime: String,
    pub engine: &'static str,
    pub ms: u64,
}

impl QueryReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut object = serde_json::json!({
            "decision": self.decision,
            "b": self.b,
            "mu": self.mu,
            "b_prime": self.b_prime,
            "engine": self.engine,
            "ms": self.ms,
        });
        if let Some(cert) = &self.certificate {
            object["certificate"] = certificate_to_json(cert);
        }
        object
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.decision { "NONEMPTY" } else { "EMPTY" };
        writeln!(out, "decision: {verdict}").unwrap();
        writeln!(out, "b: {}", self.b).unwrap();
        writeln!(out, "mu: {}", self.mu).unwrap();
        writeln!(out, "b': {}", self.b_prime).unwrap();
        writeln!(out, "engine: {}", self.engine).unwrap();
        write!(out, "elapsed: {} ms", self.ms).unwrap();
        if let Some(cert) = &self.certificate {
            write!(out, "\ncertificate:").unwrap();
            write_certificate_text(&mut out, cert, 1);
        }
        out
    }
}

pub fn certificate_to_json(cert: &Certificate) -> serde_json::Value {
    match cert {
        Certificate::Identity => serde_json::json!({ "kind": "identity" }),
        Certificate::Basic { degree } => {
            serde_json::json!({ "kind": "basic", "degree": degree })
        }
        Certificate::Inductive { top_modified, rest_modified, extension, rest } => {
            let chain: Vec<_> =
                extension.chain().iter().map(|p| p.to_string()).collect();
            let steps: Vec<serde_json::Value> = extension
                .steps()
                .iter()
                .map(|witness| {
                    witness
                        .assignment()
                        .iter()
                        .map(|(slope, origin)| {
                            serde_json::json!({
                                "slope": slope.to_string(),
                                "origin": origin_name(*origin),
                            })
                        })
                        .collect()
                })
                .collect();
            serde_json::json!({
                "kind": "inductive",
                "top_modified": top_modified.to_string(),
                "rest_modified": rest_modified.to_string(),
                "extension": { "chain": chain, "steps": steps },
                "rest": certificate_to_json(rest),
            })
        }
    }
}

fn origin_name(origin: SlopeOrigin) -> &'static str {
    match origin {
        SlopeOrigin::Sub => "sub",
        SlopeOrigin::Quot => "quot",
    }
}

fn write_certificate_text(out: &mut String, cert: &Certificate, depth: usize) {
    let pad = "  ".repeat(depth);
    match cert {
        Certificate::Identity => write!(out, "\n{pad}identity").unwrap(),
        Certificate::Basic { degree } => {
            write!(out, "\n{pad}basic modification of degree {degree}").unwrap()
        }
        Certificate::Inductive { top_modified, rest_modified, extension, rest } => {
            write!(out, "\n{pad}modified top: {top_modified}").unwrap();
            write!(out, "\n{pad}modified rest: {rest_modified}").unwrap();
            let chain: Vec<_> =
                extension.chain().iter().map(|p| p.to_string()).collect();
            write!(out, "\n{pad}extension chain: {}", chain.join(" -> ")).unwrap();
            for (i, witness) in extension.steps().iter().enumerate() {
                let slots: Vec<_> = witness
                    .assignment()
                    .iter()
                    .map(|(slope, origin)| format!("{slope}:{}", origin_name(*origin)))
                    .collect();
                write!(out, "\n{pad}step {i}: {}", slots.join(" ")).unwrap();
            }
            write!(out, "\n{pad}rest:").unwrap();
            write_certificate_text(out, rest, depth + 1);
        }
    }
}
