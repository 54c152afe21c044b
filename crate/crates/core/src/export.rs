//! Serialisable views of the computed objects: JSON, CSV, DOT and
//! aligned-column text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::admissible::{AdmissibleSet, StraightClass};
use crate::affine::{AffineWeylGroup, ExtAffineElement, Pi1Class};
use crate::coxeter::NodeSubset;
use crate::ekor::{DLDatum, StratumRecord};
use crate::error::{AtlasError, Result};
use crate::siegel::{GortzYuRow, HoeveRow};

/// `s0s2τ`-style rendering of `s_{word[0]} ⋯ s_{word[k-1]}` followed by `tail`;
/// `e` when both are empty.
pub fn word_string(word: &[usize], tail: &str) -> String {
    let mut s = String::new();
    for i in word {
        let _ = write!(s, "s{i}");
    }
    s.push_str(tail);
    if s.is_empty() {
        s.push('e');
    }
    s
}

/// Finite part: a one-line permutation of ambient coordinates when there
/// is one, otherwise the matrix on `X` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiniteJson {
    Permutation(Vec<usize>),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    /// Translation part, ambient coordinates.
    pub translation: Vec<i64>,
    pub finite: FiniteJson,
}

pub fn element_json(group: &AffineWeylGroup, x: &ExtAffineElement) -> ElementJson {
    let finite = match group.finite_one_line(x.finite()) {
        Some(p) => FiniteJson::Permutation(p),
        None => FiniteJson::Matrix(x.finite().matrix().row_vecs()),
    };
    ElementJson { translation: group.datum().to_ambient(x.translation()), finite }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmEntry {
    pub word: Vec<usize>,
    pub omega: ElementJson,
    pub length: usize,
    pub translation: Vec<i64>,
    pub finite: FiniteJson,
    pub is_straight: bool,
    /// Ambient coordinates, as reduced fractions.
    pub newton: Vec<String>,
    pub kottwitz: Pi1Class,
}

pub fn adm_entries(group: &AffineWeylGroup, adm: &AdmissibleSet) -> Vec<AdmEntry> {
    adm.elements()
        .iter()
        .zip(adm.words())
        .map(|(x, word)| {
            let el = element_json(group, x);
            AdmEntry {
                word: word.clone(),
                omega: element_json(group, adm.tau()),
                length: word.len(),
                translation: el.translation,
                finite: el.finite,
                is_straight: group.is_sigma_straight(x),
                newton: group.newton_ambient_strings(&group.newton_vector(x)),
                kottwitz: group.kottwitz(x),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusJson {
    pub images: Vec<usize>,
    pub stabilizes_parabolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetJson {
    pub level: NodeSubset,
    pub parahoric: NodeSubset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DLJson {
    pub ambient: NodeSubset,
    pub parabolic: NodeSubset,
    #[serde(rename = "type")]
    pub ambient_type: String,
    pub dim: usize,
    pub sigma_coxeter: bool,
    pub word: Vec<usize>,
    pub frobenius: FrobeniusJson,
    pub index_set: IndexSetJson,
}

pub fn dl_json(dl: &DLDatum) -> DLJson {
    DLJson {
        ambient: dl.ambient,
        parabolic: dl.parabolic,
        ambient_type: dl.ambient_type.to_string(),
        dim: dl.dimension,
        sigma_coxeter: dl.is_sigma_coxeter,
        word: dl.word.clone(),
        frobenius: FrobeniusJson {
            images: dl.frobenius.images().to_vec(),
            stabilizes_parabolic: dl.frobenius_stabilizes_parabolic,
        },
        index_set: IndexSetJson { level: dl.index_set.0, parahoric: dl.index_set.1 },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonJson {
    pub nu: Vec<String>,
    pub kappa: Pi1Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumJson {
    pub w: ElementJson,
    pub word: Vec<usize>,
    pub length: usize,
    #[serde(rename = "K")]
    pub k: NodeSubset,
    pub basic: bool,
    pub supp_sigma: NodeSubset,
    pub i_set: NodeSubset,
    pub dl: Option<DLJson>,
    pub newton: Option<NewtonJson>,
}

pub fn stratum_json(group: &AffineWeylGroup, rec: &StratumRecord) -> StratumJson {
    StratumJson {
        w: element_json(group, &rec.w),
        word: rec.word.clone(),
        length: rec.length,
        k: rec.k.nodes(),
        basic: rec.is_basic,
        supp_sigma: rec.supp.closure,
        i_set: rec.i_set,
        dl: rec.dl.as_ref().map(dl_json),
        newton: rec
            .newton
            .as_ref()
            .map(|(nu, kappa)| NewtonJson { nu: group.newton_ambient_strings(nu), kappa: kappa.clone() }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraightClassJson {
    pub newton: Vec<String>,
    pub kottwitz: Pi1Class,
    pub representative: ElementJson,
    pub size: usize,
    pub basic: bool,
}

pub fn straight_class_json(group: &AffineWeylGroup, c: &StraightClass) -> StraightClassJson {
    StraightClassJson {
        newton: group.newton_ambient_strings(&c.newton),
        kottwitz: c.kottwitz.clone(),
        representative: element_json(group, &c.representative),
        size: c.size,
        basic: c.is_basic,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GortzYuJson {
    pub word: Vec<usize>,
    pub length: usize,
    pub c: usize,
    #[serde(rename = "J")]
    pub j: NodeSubset,
    pub supp_sigma: NodeSubset,
    pub y_ambient: NodeSubset,
    pub y_type: String,
    pub y_parabolic: NodeSubset,
    pub stratum: String,
    pub generic: DLJson,
}

pub fn gortz_yu_json(rows: &[GortzYuRow]) -> Vec<GortzYuJson> {
    rows.iter()
        .map(|r| GortzYuJson {
            word: r.word.clone(),
            length: r.length,
            c: r.c,
            j: r.j,
            supp_sigma: r.supp_sigma,
            y_ambient: r.y_ambient,
            y_type: r.y_type.to_string(),
            y_parabolic: r.y_parabolic,
            stratum: r.stratum_label.clone(),
            generic: dl_json(&r.generic),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoeveJson {
    pub c: usize,
    pub w: Vec<usize>,
    pub x: Vec<usize>,
    pub supp_sigma: NodeSubset,
    pub closed_supp: NodeSubset,
    pub i_set: NodeSubset,
    pub closed_i_set: NodeSubset,
    pub agrees: bool,
    pub generic: DLJson,
}

pub fn hoeve_json(rows: &[HoeveRow]) -> Vec<HoeveJson> {
    rows.iter()
        .map(|r| HoeveJson {
            c: r.c,
            w: r.w_word.clone(),
            x: r.x_word.clone(),
            supp_sigma: r.supp_sigma,
            closed_supp: r.closed_supp,
            i_set: r.i_set,
            closed_i_set: r.closed_i_set,
            agrees: r.agrees(),
            generic: dl_json(&r.generic),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub g: usize,
    pub gortz_yu: Vec<GortzYuJson>,
    pub hoeve: Vec<HoeveJson>,
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| AtlasError::Consistency(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn nodes_cell(s: NodeSubset) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_csv(headers: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| AtlasError::Consistency(e.to_string());
    w.write_record(headers).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| AtlasError::Consistency(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| AtlasError::Consistency(e.to_string()))
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn finite_cell(f: &FiniteJson) -> String {
    match f {
        FiniteJson::Permutation(p) => join(p, " "),
        FiniteJson::Matrix(m) => m.iter().map(|r| join(r, " ")).collect::<Vec<_>>().join("; "),
    }
}

pub fn adm_csv(entries: &[AdmEntry]) -> Result<String> {
    write_csv(
        &["word", "length", "translation", "finite", "is_straight", "newton", "kottwitz"],
        entries.iter().map(|e| {
            vec![
                join(&e.word, " "),
                e.length.to_string(),
                join(&e.translation, " "),
                finite_cell(&e.finite),
                e.is_straight.to_string(),
                e.newton.join(" "),
                e.kottwitz.to_string(),
            ]
        }),
    )
}

pub fn strata_csv(records: &[StratumJson]) -> Result<String> {
    write_csv(
        &["word", "length", "K", "basic", "supp_sigma", "i_set", "dl_ambient", "dl_type", "dl_dim", "sigma_coxeter"],
        records.iter().map(|r| {
            let dl = r.dl.as_ref();
            vec![
                join(&r.word, " "),
                r.length.to_string(),
                nodes_cell(r.k),
                r.basic.to_string(),
                nodes_cell(r.supp_sigma),
                nodes_cell(r.i_set),
                dl.map(|d| nodes_cell(d.ambient)).unwrap_or_default(),
                dl.map(|d| d.ambient_type.clone()).unwrap_or_default(),
                dl.map(|d| d.dim.to_string()).unwrap_or_default(),
                dl.map(|d| d.sigma_coxeter.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

/// Hasse diagram of the Bruhat order on `Adm(μ)`; nodes for which
/// `highlight` holds are drawn double-circled.
pub fn adm_dot(
    group: &AffineWeylGroup,
    adm: &AdmissibleSet,
    tail: &str,
    highlight: impl Fn(&ExtAffineElement) -> bool,
) -> String {
    let mut s = String::from("digraph adm {\n  rankdir=BT;\n  node [shape=circle];\n");
    for (i, x) in adm.elements().iter().enumerate() {
        let shape = if highlight(x) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", word_string(adm.word_of(i), tail));
    }
    let elems = adm.elements();
    for (i, x) in elems.iter().enumerate() {
        let lx = adm.word_of(i).len();
        for (j, y) in elems.iter().enumerate() {
            if adm.word_of(j).len() == lx + 1 && group.bruhat_leq(x, y) {
                let _ = writeln!(s, "  n{i} -> n{j};");
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Left-aligned columns separated by two spaces, with a rule under the header.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let n = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut out = String::new();
            for (k, c) in cells.iter().enumerate().take(n) {
                out.push_str(c);
                if k + 1 < n {
                    out.extend(std::iter::repeat(' ').take(widths[k] - c.chars().count() + 2));
                }
            }
            out.trim_end().to_string()
        };
        let mut s = line(&self.headers);
        s.push('\n');
        let total = widths.iter().sum::<usize>() + 2 * n.saturating_sub(1);
        s.push_str(&"-".repeat(total));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&line(r));
            s.push('\n');
        }
        s
    }
}

pub fn adm_table(entries: &[AdmEntry], tail: &str) -> Table {
    let mut t = Table::new(&["element", "length", "translation", "finite", "straight", "newton"]);
    for e in entries {
        t.push(vec![
            word_string(&e.word, tail),
            e.length.to_string(),
            format!("({})", join(&e.translation, ",")),
            finite_cell(&e.finite),
            if e.is_straight { "yes".into() } else { "".into() },
            format!("({})", e.newton.join(",")),
        ]);
    }
    t
}

pub fn strata_table(records: &[StratumJson], tail: &str) -> Table {
    let mut t = Table::new(&["element", "length", "basic", "supp_sigma", "I(K,w,sigma)", "DL type", "dim", "coxeter"]);
    for r in records {
        let dl = r.dl.as_ref();
        t.push(vec![
            word_string(&r.word, tail),
            r.length.to_string(),
            if r.basic { "yes".into() } else { "".into() },
            r.supp_sigma.to_string(),
            r.i_set.to_string(),
            dl.map(|d| d.ambient_type.clone()).unwrap_or_default(),
            dl.map(|d| d.dim.to_string()).unwrap_or_default(),
            dl.map(|d| if d.sigma_coxeter { "yes".into() } else { "no".into() }).unwrap_or_default(),
        ]);
    }
    t
}

pub fn gortz_yu_table(rows: &[GortzYuJson], tail: &str) -> Table {
    let mut t = Table::new(&["element", "length", "c", "J", "supp_sigma", "Y(J,w) ambient", "stratum"]);
    for r in rows {
        t.push(vec![
            word_string(&r.word, tail),
            r.length.to_string(),
            r.c.to_string(),
            r.j.to_string(),
            r.supp_sigma.to_string(),
            format!("{} ({})", r.y_ambient, r.y_type),
            r.stratum.clone(),
        ]);
    }
    t
}

pub fn hoeve_table(rows: &[HoeveJson], tail: &str) -> Table {
    let mut t =
        Table::new(&["c", "w", "x", "supp_sigma", "Lemma supp", "I(K,w,sigma)", "Lemma I", "dim", "coxeter", "agree"]);
    for r in rows {
        t.push(vec![
            r.c.to_string(),
            word_string(&r.w, ""),
            word_string(&r.x, tail),
            r.supp_sigma.to_string(),
            r.closed_supp.to_string(),
            r.i_set.to_string(),
            r.closed_i_set.to_string(),
            r.generic.dim.to_string(),
            if r.generic.sigma_coxeter { "yes".into() } else { "no".into() },
            if r.agrees { "yes".into() } else { "NO".into() },
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::ParahoricLabel;
    use crate::ekor::stratum_report;
    use crate::siegel::SiegelContext;

    #[test]
    fn words() {
        assert_eq!(word_string(&[], ""), "e");
        assert_eq!(word_string(&[], "τ"), "τ");
        assert_eq!(word_string(&[0, 2], "τ"), "s0s2τ");
    }

    #[test]
    fn adm_json_round_trip() {
        let ctx = SiegelContext::new(2).unwrap();
        let entries = adm_entries(ctx.group(), ctx.adm());
        let s = to_json(&entries).unwrap();
        let back: Vec<AdmEntry> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, entries);
        assert_eq!(to_json(&back).unwrap(), s);
        assert_eq!(entries[0].translation, vec![0, 0, 1, 1]);
        assert_eq!(entries[0].finite, FiniteJson::Permutation(vec![3, 4, 1, 2]));
        assert_eq!(entries[0].newton, vec!["1/2"; 4]);
    }

    #[test]
    fn stratum_json_shape() {
        let ctx = SiegelContext::new(2).unwrap();
        let recs = stratum_report(ctx.group(), ctx.adm(), ctx.hyperspecial()).unwrap();
        let js: Vec<StratumJson> = recs.iter().map(|r| stratum_json(ctx.group(), r)).collect();
        let v: serde_json::Value = serde_json::to_value(&js[1]).unwrap();
        assert_eq!(v["K"], serde_json::json!([1, 2]));
        assert_eq!(v["dl"]["type"], "A1xA1");
        assert_eq!(v["dl"]["frobenius"]["images"], serde_json::json!([2, 1, 0]));
        assert_eq!(v["basic"], true);
        let s = to_json(&js).unwrap();
        let back: Vec<StratumJson> = serde_json::from_str(&s).unwrap();
        assert_eq!(to_json(&back).unwrap(), s);
    }

    #[test]
    fn dot_marks_basic() {
        let ctx = SiegelContext::new(1).unwrap();
        let dot = adm_dot(ctx.group(), ctx.adm(), "τ", |x| x == &ctx.tau().element);
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn csv_and_table() {
        let ctx = SiegelContext::new(1).unwrap();
        let csv = adm_csv(&adm_entries(ctx.group(), ctx.adm())).unwrap();
        assert_eq!(csv.lines().count(), 4);
        let recs = stratum_report(ctx.group(), ctx.adm(), ParahoricLabel::iwahori()).unwrap();
        let js: Vec<StratumJson> = recs.iter().map(|r| stratum_json(ctx.group(), r)).collect();
        let text = strata_table(&js, "τ").render();
        assert!(text.starts_with("element"));
        assert_eq!(text.lines().count(), 5);
    }
}
