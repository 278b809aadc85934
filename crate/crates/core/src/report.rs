//! Full verification runs and their reports.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{BitMat, Gf2Error};
use crate::homology::{
    eval_word, is_isometry, rotation_signed, sigma_signed, transvection, HomologyError,
    MappingClassWord,
};
use crate::ledger::{run_ledger_for, third_generator, third_index, CheckOutcome, LedgerError};
use crate::stabchain::{bsgs, target_isometry_order, ChainError, StabChain};
use crate::surface::{self, CurveTable, SurfaceError};

/// Printed at the top of every report.
pub const CAVEAT: &str = "Homology-level ledger checks are necessary-condition checks: a pass does not prove surface-level identity; a fail disproves it.";

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Where the curve table came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DataInfo {
    pub source: String,
    /// FNV-1a 64 of the document text, hex.
    pub checksum: String,
}

impl DataInfo {
    pub fn new(source: &str, text: &str) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        Self {
            source: source.to_string(),
            checksum: format!("{h:016x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orders {
    #[serde(rename = "T")]
    pub t: u64,
    pub sigma: u64,
    pub third: u64,
    /// Word of the third generator.
    pub third_word: String,
    pub expected_t: u64,
    /// σ fixes `γ_{g−3}` and `c_k` as traces.
    pub sigma_fixes_curves: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Determinants {
    #[serde(rename = "T")]
    pub t: i64,
    pub sigma: i64,
    pub sigma_squared_identity: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub element: String,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Redundancy {
    pub dropped: String,
    pub order: String,
    pub strictly_smaller: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupOrder {
    pub computed: String,
    pub target: String,
    #[serde(rename = "match")]
    pub matches: bool,
    pub orbit_sizes: Vec<usize>,
    pub all_isometries: bool,
    /// Dehn twist generators and the four- or five-element generating set, sifted
    /// through the three-generator chain.
    pub memberships: Vec<Membership>,
    pub twist_order: String,
    pub twist_order_matches: bool,
    /// The three generators sifted through the twist-generated chain.
    pub reverse_memberships: Vec<Membership>,
    pub non_redundancy: Vec<Redundancy>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks_passed: usize,
    pub checks_failed: usize,
    pub pass: bool,
}

/// A verification report. Sections not computed by a command are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub genus: usize,
    pub tool_version: String,
    pub data: DataInfo,
    pub seed: u64,
    pub caveat: String,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Orders>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<GroupOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinants: Option<Determinants>,
    pub notes: Vec<String>,
    pub summary: Summary,
}

impl Report {
    fn new(table: &CurveTable, data: DataInfo, seed: u64) -> Self {
        Self {
            genus: table.genus(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            data,
            seed,
            caveat: CAVEAT.to_string(),
            checks: Vec::new(),
            orders: None,
            group_order: None,
            determinants: None,
            notes: notes(table),
            summary: Summary {
                checks_passed: 0,
                checks_failed: 0,
                pass: true,
            },
        }
    }

    fn finish(mut self) -> Self {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.summary = Summary {
            checks_passed: passed,
            checks_failed: self.checks.len() - passed,
            pass: passed == self.checks.len()
                && self.orders.as_ref().is_none_or(|o| o.pass)
                && self.group_order.as_ref().is_none_or(|g| g.pass)
                && self.determinants.as_ref().is_none_or(|d| d.pass),
        };
        self
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "genus {}  (twistgen {}, data {} {})", self.genus, self.tool_version, self.data.source, self.data.checksum);
        let _ = writeln!(s, "note: {}", self.caveat);
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "\nidentity ledger");
            for c in &self.checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "  [{mark}] {} ({}) {}", c.id, c.level, c.statement);
                let _ = writeln!(s, "         printed: {}", c.paper_line);
                if let Some(n) = &c.note {
                    let _ = writeln!(s, "         note: {n}");
                }
                if let (false, Some(d)) = (c.pass, &c.detail) {
                    let _ = writeln!(s, "         detail: {d}");
                }
            }
        }
        if let Some(o) = &self.orders {
            let _ = writeln!(s, "\norders");
            let _ = writeln!(
                s,
                "  T: {}, sigma: {}, {}: {}",
                o.t,
                o.sigma,
                o.third_word.replace(' ', "*"),
                o.third
            );
            let _ = writeln!(s, "  sigma fixes the twisted curves: {}", o.sigma_fixes_curves);
            let _ = writeln!(s, "  {}", if o.pass { "PASS" } else { "FAIL" });
        }
        if let Some(d) = &self.determinants {
            let _ = writeln!(s, "\ndeterminants");
            let _ = writeln!(s, "  D(T)={:+}, D(sigma)={:+}, sigma^2 = I: {}", d.t, d.sigma, d.sigma_squared_identity);
            let _ = writeln!(s, "  {}", if d.pass { "PASS" } else { "FAIL" });
        }
        if let Some(g) = &self.group_order {
            let _ = writeln!(s, "\ngeneration");
            let _ = writeln!(s, "  computed order: {}", g.computed);
            let _ = writeln!(s, "  target order:   {}", g.target);
            let _ = writeln!(s, "  match: {}", g.matches);
            let _ = writeln!(s, "  orbit sizes: {:?}", g.orbit_sizes);
            let _ = writeln!(s, "  all generator images are isometries: {}", g.all_isometries);
            let missing: Vec<&str> = g.memberships.iter().filter(|m| !m.contained).map(|m| m.element.as_str()).collect();
            let _ = writeln!(s, "  memberships: {}/{} contained{}", g.memberships.len() - missing.len(), g.memberships.len(), fmt_missing(&missing));
            let _ = writeln!(s, "  twist-generated chain order: {} (match: {})", g.twist_order, g.twist_order_matches);
            let missing: Vec<&str> = g.reverse_memberships.iter().filter(|m| !m.contained).map(|m| m.element.as_str()).collect();
            let _ = writeln!(s, "  reverse memberships: {}/{} contained{}", g.reverse_memberships.len() - missing.len(), g.reverse_memberships.len(), fmt_missing(&missing));
            for r in &g.non_redundancy {
                let _ = writeln!(s, "  without {}: order {} (strictly smaller: {})", r.dropped, r.order, r.strictly_smaller);
            }
            let _ = writeln!(s, "  {}", if g.pass { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(
            s,
            "\nsummary: {} ledger checks passed, {} failed; overall {}",
            self.summary.checks_passed,
            self.summary.checks_failed,
            if self.summary.pass { "PASS" } else { "FAIL" }
        );
        s
    }
}

fn fmt_missing(missing: &[&str]) -> String {
    if missing.is_empty() {
        String::new()
    } else {
        format!(" (missing: {})", missing.join(", "))
    }
}

fn notes(table: &CurveTable) -> Vec<String> {
    let model = table.model();
    let mut n = vec![
        "homology basis: one-sided classes x1..xg; the pairing is the identity form".to_string(),
        format!(
            "reflection: {}",
            if model.is_odd() { "(2 3)(g-2 g)" } else { "(2 3)(4 5)(g-2 g)" }
        ),
    ];
    if let Some(c) = model.center() {
        n.push(format!("even layout: central crosscap is x{c}, fixed by T"));
        n.push(
            "third generator uses C_{(g-8)/2}; one proof sentence prints (g-9)/2".to_string(),
        );
    }
    n
}

/// Runs the identity ledger alone.
pub fn identities(table: &CurveTable, data: DataInfo) -> Result<Report, VerifyError> {
    let mut report = Report::new(table, data, 0);
    report.checks = run_ledger_for(table)?;
    Ok(report.finish())
}

/// Element orders of `T`, `σ` and the third generator, plus σ-fixedness of
/// the curves twisted in the third generator.
pub fn verify_involutions_and_orders(table: &CurveTable) -> Result<Orders, VerifyError> {
    let g = table.genus();
    let model = table.model();
    let t = eval_word(&MappingClassWord::parse("T")?, table)?.order()?;
    let sigma = eval_word(&MappingClassWord::parse("S")?, table)?.order()?;
    let third_word = third_generator(g);
    let third = eval_word(&third_word, table)?.order()?;
    let gamma = format!("gamma{}", g - 3);
    let ck = format!("c{}", third_index(g));
    let sigma_fixes_curves = [gamma, ck]
        .iter()
        .map(|n| surface::reflect_curve(table, n).map(|img| table.normalized(&img) == table.normalized(n)))
        .collect::<Result<Vec<_>, _>>()
        .map(|v| v.iter().all(|&b| b))
        .unwrap_or(false);
    let expected_t = model.rotation_order() as u64;
    Ok(Orders {
        t,
        sigma,
        third,
        third_word: third_word.to_string(),
        expected_t,
        sigma_fixes_curves,
        pass: t == expected_t && sigma == 2 && (third == 1 || third == 2) && sigma_fixes_curves,
    })
}

/// Determinants of `T` and `σ` on real homology.
pub fn determinants(table: &CurveTable) -> Result<Determinants, VerifyError> {
    let model = table.model();
    let s = sigma_signed(model)?;
    let t = rotation_signed(model)?;
    let (dt, ds) = (t.det(), s.det());
    let sq = s.mul(&s).is_identity();
    Ok(Determinants {
        t: dt,
        sigma: ds,
        sigma_squared_identity: sq,
        pass: dt == 1 && ds == 1 && sq,
    })
}

/// Images of `T`, `σ` and the third generator.
pub fn three_generators(table: &CurveTable) -> Result<Vec<(String, BitMat)>, VerifyError> {
    let mut out = Vec::new();
    for w in ["T".to_string(), "S".to_string(), third_generator(table.genus()).to_string()] {
        let m = eval_word(&MappingClassWord::parse(&w)?, table)?;
        out.push((w, m));
    }
    Ok(out)
}

/// The Dehn twist generating set `A1, A2, B1..Br, C1..C_{r-1}, (D_r,) E`.
pub fn twist_generators(table: &CurveTable) -> Result<Vec<(String, BitMat)>, VerifyError> {
    let model = table.model();
    let r = model.r();
    let mut names = vec!["a1".to_string(), "a2".to_string()];
    names.extend((1..=r).map(|i| format!("b{i}")));
    names.extend((1..r).map(|i| format!("c{i}")));
    if !model.is_odd() {
        names.push(format!("d{r}"));
    }
    names.push("e".into());
    names
        .into_iter()
        .map(|n| {
            let m = transvection(&surface::curve_class(table, &n)?)?;
            Ok((n.to_uppercase(), m))
        })
        .collect()
}

/// The generating set `T, A1A2^-1, B1B2^-1, (D_r,) E`.
pub fn intermediate_generators(table: &CurveTable) -> Result<Vec<(String, BitMat)>, VerifyError> {
    let model = table.model();
    let mut words = vec!["T".to_string(), "A1 A2^-1".into(), "B1 B2^-1".into()];
    if !model.is_odd() {
        words.push(format!("D{}", model.r()));
    }
    words.push("E".into());
    words
        .into_iter()
        .map(|w| Ok((w.clone(), eval_word(&MappingClassWord::parse(&w)?, table)?)))
        .collect()
}

fn chain_of(table: &CurveTable, gens: &[(String, BitMat)], seed: u64) -> Result<StabChain, VerifyError> {
    let mats: Vec<BitMat> = gens.iter().map(|(_, m)| m.clone()).collect();
    Ok(bsgs(table.genus(), &mats, seed)?)
}

/// Order of the three-generator image against the isometry group, with
/// membership of both Dehn twist generating sets.
pub fn verify_generation(table: &CurveTable, seed: u64) -> Result<GroupOrder, VerifyError> {
    let g = table.genus();
    let three = three_generators(table)?;
    let twist = twist_generators(table)?;
    let inter = intermediate_generators(table)?;
    let chain = chain_of(table, &three, seed)?;
    let computed = chain.order();
    let target = target_isometry_order(g);

    let all_isometries = three
        .iter()
        .chain(&twist)
        .chain(&inter)
        .all(|(_, m)| is_isometry(m));
    let memberships: Vec<Membership> = twist
        .iter()
        .chain(&inter)
        .map(|(n, m)| Membership {
            element: n.clone(),
            contained: chain.contains(m),
        })
        .collect();
    let twist_chain = chain_of(table, &twist, seed)?;
    let twist_order = twist_chain.order();
    let reverse_memberships: Vec<Membership> = three
        .iter()
        .map(|(n, m)| Membership {
            element: n.clone(),
            contained: twist_chain.contains(m),
        })
        .collect();

    let mut non_redundancy = Vec::new();
    for skip in 0..three.len() {
        let rest: Vec<(String, BitMat)> = three
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, x)| x.clone())
            .collect();
        let order = chain_of(table, &rest, seed)?.order();
        non_redundancy.push(Redundancy {
            dropped: three[skip].0.clone(),
            strictly_smaller: order < computed,
            order: order.to_string(),
        });
    }

    let matches = computed == target;
    let twist_order_matches = twist_order == computed;
    let pass = matches
        && all_isometries
        && twist_order_matches
        && memberships.iter().all(|m| m.contained)
        && reverse_memberships.iter().all(|m| m.contained);
    Ok(GroupOrder {
        computed: computed.to_string(),
        target: target.to_string(),
        matches,
        orbit_sizes: chain.orbit_sizes(),
        all_isometries,
        memberships,
        twist_order: twist_order.to_string(),
        twist_order_matches,
        reverse_memberships,
        non_redundancy,
        pass,
    })
}

/// Element orders, determinants and the group order, without the ledger.
pub fn orders(table: &CurveTable, data: DataInfo, seed: u64) -> Result<Report, VerifyError> {
    let mut report = Report::new(table, data, seed);
    report.orders = Some(verify_involutions_and_orders(table)?);
    report.determinants = Some(determinants(table)?);
    report.group_order = Some(verify_generation(table, seed)?);
    Ok(report.finish())
}

/// The full pipeline: ledger, orders, determinants and generation.
pub fn verify(table: &CurveTable, data: DataInfo, seed: u64) -> Result<Report, VerifyError> {
    let mut report = orders(table, data, seed)?;
    report.checks = run_ledger_for(table)?;
    Ok(report.finish())
}
