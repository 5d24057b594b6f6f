//! Serialization of the stored formula objects in canonical, LaTeX and JSON form.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::algebra::{Matrix, PolyExpr, RatExpr, Scalar, SqrtExt};
use crate::bun_chart::{
    classify_polys, involution_rats, weddle_poly, ChartPoint, FIBER_A_TEXT, FIBER_B_TEXT, FIBER_C_TEXT, FIBER_R_TEXT,
    FIBER_S_TEXT,
};
use crate::error::{Error, Result};
use crate::formula::{poly, poly_env, ratf};
use crate::higgs::{hamiltonians_rst, higgs_basis_field, Direction};
use crate::hitchin::{u_table_numerators, vgp_symbolic, USource, TABLE_U_DENOMINATOR};
use crate::nr_moduli::{
    kummer_u_rat, kummer_v_poly, nice_basis_matrix, omega_context, omega_env, torsion_generator_u, torsion_generator_v,
    NiceBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitObject {
    KummerV,
    KummerU,
    Weddle,
    Classify,
    Inverse,
    Involution,
    TorsionV,
    TorsionU,
    NiceBasis,
    HiggsBasis,
    HamiltoniansRst,
    HamiltoniansU,
    Vgp,
}

impl EmitObject {
    pub const ALL: [EmitObject; 13] = [
        EmitObject::KummerV,
        EmitObject::KummerU,
        EmitObject::Weddle,
        EmitObject::Classify,
        EmitObject::Inverse,
        EmitObject::Involution,
        EmitObject::TorsionV,
        EmitObject::TorsionU,
        EmitObject::NiceBasis,
        EmitObject::HiggsBasis,
        EmitObject::HamiltoniansRst,
        EmitObject::HamiltoniansU,
        EmitObject::Vgp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmitObject::KummerV => "kummer-v",
            EmitObject::KummerU => "kummer-u",
            EmitObject::Weddle => "weddle",
            EmitObject::Classify => "classify",
            EmitObject::Inverse => "inverse",
            EmitObject::Involution => "involution",
            EmitObject::TorsionV => "torsion-v",
            EmitObject::TorsionU => "torsion-u",
            EmitObject::NiceBasis => "nice-basis",
            EmitObject::HiggsBasis => "higgs-basis",
            EmitObject::HamiltoniansRst => "hamiltonians-rst",
            EmitObject::HamiltoniansU => "hamiltonians-u",
            EmitObject::Vgp => "vgp",
        }
    }
}

impl fmt::Display for EmitObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmitObject {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EmitObject::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown object `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Canonical,
    Latex,
    Json,
}

impl FromStr for EmitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(EmitFormat::Canonical),
            "latex" => Ok(EmitFormat::Latex),
            "json" => Ok(EmitFormat::Json),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

/// One named entry of an emitted object.
#[derive(Clone, Debug)]
pub enum Entry {
    Poly(PolyExpr),
    Rat(RatExpr),
    /// Element of an extension ring, already rendered.
    Text { canonical: String, latex: String },
}

impl Entry {
    fn canonical(&self) -> String {
        match self {
            Entry::Poly(p) => p.to_string(),
            Entry::Rat(q) => q.to_string(),
            Entry::Text { canonical, .. } => canonical.clone(),
        }
    }

    fn latex(&self) -> String {
        match self {
            Entry::Poly(p) => p.to_latex(),
            Entry::Rat(q) => q.to_latex(),
            Entry::Text { latex, .. } => latex.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Entry::Poly(p) => p.to_json(),
            Entry::Rat(q) => q.to_json(),
            Entry::Text { canonical, .. } => json!({ "canonical": canonical }),
        }
    }
}

fn sqrt_entry(x: &SqrtExt<PolyExpr>) -> Entry {
    let latex_gen = |g: &str| match g {
        "w0" => "\\omega_0",
        "w1" => "\\omega_1",
        "wr" => "\\omega_r",
        "ws" => "\\omega_s",
        other => other,
    }
    .to_string();
    let canonical = x.to_string();
    let mut latex = x.display_with(|c| c.to_latex()).replace(")*", ") ");
    for g in ["w0", "w1", "wr", "ws"] {
        latex = latex.replace(g, &latex_gen(g));
    }
    Entry::Text { canonical, latex }
}

fn matrix_entries<C: Scalar, F: Fn(&C) -> Entry>(name: &str, m: &Matrix<C>, f: F) -> Vec<(String, Entry)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push((format!("{name}[{i}][{j}]"), f(m.get(i, j))));
        }
    }
    out
}

/// The named entries of `object`; `source` only matters for hamiltonians-u.
pub fn object_entries(object: EmitObject, source: USource) -> Result<Vec<(String, Entry)>> {
    let env = poly_env();
    let named = |names: &[&str], polys: &[PolyExpr]| -> Vec<(String, Entry)> {
        names.iter().zip(polys).map(|(n, p)| (n.to_string(), Entry::Poly(p.clone()))).collect()
    };
    Ok(match object {
        EmitObject::KummerV => vec![("KummerV".into(), Entry::Poly(kummer_v_poly().clone()))],
        EmitObject::KummerU => vec![("KummerU".into(), Entry::Rat(kummer_u_rat().clone()))],
        EmitObject::Weddle => vec![("Wed".into(), Entry::Poly(weddle_poly().clone()))],
        EmitObject::Classify => named(&["v0", "v1", "v2", "v3"], classify_polys()),
        EmitObject::Inverse => {
            let mut out = named(&["a", "b", "c"], &[poly(FIBER_A_TEXT), poly(FIBER_B_TEXT), poly(FIBER_C_TEXT)]);
            for (n, (num, den)) in [("R(T)", FIBER_R_TEXT), ("S(T)", FIBER_S_TEXT)] {
                out.push((n.into(), Entry::Rat(ratf(&format!("({num})/({den})")))));
            }
            out
        }
        EmitObject::Involution => ["R~", "S~", "T~"]
            .iter()
            .zip(involution_rats())
            .map(|(n, q)| (n.to_string(), Entry::Rat(q.clone())))
            .collect(),
        EmitObject::TorsionV => {
            let names = ["M_w0", "M_w1", "M_wr", "M_ws"];
            let mut out = Vec::new();
            for (k, n) in names.iter().enumerate() {
                out.extend(matrix_entries(n, &torsion_generator_v(env, k)?, |p: &PolyExpr| Entry::Poly(p.clone())));
            }
            out
        }
        EmitObject::TorsionU => {
            let names = ["Mt_w0", "Mt_w1", "Mt_wr", "Mt_ws"];
            let mut out = Vec::new();
            for (k, n) in names.iter().enumerate() {
                out.extend(matrix_entries(n, &torsion_generator_u(env.template(), k)?, |p: &PolyExpr| Entry::Poly(p.clone())));
            }
            out
        }
        EmitObject::NiceBasis => {
            let ctx = omega_context(env)?;
            let oenv = omega_env(env, &ctx)?;
            matrix_entries("M", &nice_basis_matrix(&oenv, NiceBasis::Corrected)?, sqrt_entry)
        }
        EmitObject::HiggsBasis => {
            let p = ChartPoint::new(poly("R"), poly("S"), poly("T"));
            let mut out = Vec::new();
            for d in Direction::ALL {
                let field = higgs_basis_field(d, &p);
                for (w, res) in &field.residues {
                    let name = format!("Res_{}(theta_{})", w, d.coordinate().to_lowercase());
                    out.extend(matrix_entries(&name, res, |x: &PolyExpr| Entry::Poly(x.clone())));
                }
            }
            out
        }
        EmitObject::HamiltoniansRst => named(&["h0", "h1", "h2"], hamiltonians_rst()),
        EmitObject::HamiltoniansU => {
            let nums = u_table_numerators(source)?;
            let mut out = named(&["N0", "N1", "N2"], nums);
            out.push(("denominator".into(), Entry::Poly(poly(TABLE_U_DENOMINATOR))));
            out
        }
        EmitObject::Vgp => ["H1", "H2", "H3", "H4", "H5", "H6"]
            .iter()
            .zip(vgp_symbolic()?)
            .map(|(n, q)| (n.to_string(), Entry::Rat(q)))
            .collect(),
    })
}

fn latex_name(name: &str) -> String {
    match name.split_once('(') {
        Some((head, rest)) => format!("{}({}", latex_ident(head), rest),
        None => latex_ident(name),
    }
}

fn latex_ident(name: &str) -> String {
    let name = name.replace('~', "");
    match name.split_once('_') {
        Some((a, b)) => format!("{a}_{{{b}}}"),
        None => match name.char_indices().find(|(_, c)| c.is_ascii_digit()) {
            Some((i, _)) => format!("{}_{{{}}}", &name[..i], &name[i..]),
            None => name,
        },
    }
}

pub fn emit(object: EmitObject, format: EmitFormat, source: USource) -> Result<String> {
    let entries = object_entries(object, source)?;
    Ok(match format {
        EmitFormat::Canonical => {
            let mut s = String::new();
            for (n, e) in &entries {
                s.push_str(&format!("{n} = {}\n", e.canonical()));
            }
            s
        }
        EmitFormat::Latex => {
            let mut s = String::new();
            for (n, e) in &entries {
                s.push_str(&format!("{} = {}\n\n", latex_name(n), e.latex()));
            }
            s
        }
        EmitFormat::Json => {
            let list: Vec<Value> = entries.iter().map(|(n, e)| json!({ "name": n, "value": e.json() })).collect();
            let doc = json!({ "object": object.name(), "entries": list });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
    })
}
