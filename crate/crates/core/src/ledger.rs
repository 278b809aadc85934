//! The identity ledger: every displayed identity of the generation argument,
//! as a machine-checkable entry.
//!
//! Entries come in three levels. Symbolic entries apply σ/T words to curve
//! traces. Homology entries compare mod-2 actions. Telescoping entries compare
//! words after free reduction, since mod-2 matrices cannot see exponents.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::BitVec;
use crate::homology::{eval_word_in, ClassContext, GenToken, HomologyError, MappingClassWord};
use crate::surface::{normalize_trace, CurveTable, MIN_REFLECTION_GENUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("genus {0} is unsupported (need at least {MIN_REFLECTION_GENUS})")]
    UnsupportedGenus(usize),
    #[error("entry {id}: {source}")]
    Entry {
        id: String,
        #[source]
        source: HomologyError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    Symbolic,
    Homology,
    Telescoping,
}

impl fmt::Display for CheckLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckLevel::Symbolic => "symbolic",
            CheckLevel::Homology => "homology",
            CheckLevel::Telescoping => "telescoping",
        })
    }
}

/// What an entry asserts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    /// `word(inputs[i]) = expected[i]` for each `i`.
    Images {
        word: MappingClassWord,
        inputs: Vec<String>,
        expected: Vec<String>,
    },
    /// `lhs = rhs`, as matrices or after free reduction.
    Equation {
        lhs: MappingClassWord,
        rhs: MappingClassWord,
    },
    /// Introduces the class `defines := word(input)`; each curve in `fixed`
    /// must be fixed by `word`.
    Definition {
        word: MappingClassWord,
        input: String,
        defines: String,
        fixed: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: String,
    pub level: CheckLevel,
    pub claim: Claim,
    /// The displayed identity as printed, for failure messages.
    pub paper_line: String,
    /// Implementation remark, e.g. a derived power or a misprint.
    pub note: Option<String>,
}

impl IdentityCheck {
    /// Human-readable form of the claim.
    pub fn statement(&self) -> String {
        match &self.claim {
            Claim::Images {
                word,
                inputs,
                expected,
            } => format!("{word} ({}) = ({})", inputs.join(","), expected.join(",")),
            Claim::Equation { lhs, rhs } => format!("{lhs} = {rhs}"),
            Claim::Definition {
                word,
                input,
                defines,
                fixed,
            } => {
                let mut ins = vec![input.clone()];
                ins.extend(fixed.iter().cloned());
                let mut outs = vec![defines.clone()];
                outs.extend(fixed.iter().cloned());
                format!("{word} ({}) = ({}) [defines {defines}]", ins.join(","), outs.join(","))
            }
        }
    }
}

/// Result of running one entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub level: CheckLevel,
    pub statement: String,
    pub paper_line: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Exponent of the twisted curve used with σ in the third generator:
/// `(g−9)/2` for odd genus, `(g−8)/2` for even genus.
pub fn third_index(g: usize) -> usize {
    if g % 2 == 1 {
        (g - 9) / 2
    } else {
        (g - 8) / 2
    }
}

/// The third generator `σ Γ_{g−3} C_k^{-1}` as a word.
pub fn third_generator(g: usize) -> MappingClassWord {
    word(&format!("S Gamma{} C{}^-1", g - 3, third_index(g)))
}

/// Circle offset of a named pair curve along the `T`-orbit of `a1`:
/// `a1 ↦ 0`, `b_i ↦ 2i − 1`, `c_i ↦ 2i`.
fn orbit_offset(name: &str) -> Option<i64> {
    let (head, idx) = name.split_at(1);
    let i: i64 = idx.parse().ok()?;
    match head {
        "a" if i == 1 => Some(0),
        "b" => Some(2 * i - 1),
        "c" => Some(2 * i),
        _ => None,
    }
}

fn word(text: &str) -> MappingClassWord {
    MappingClassWord::parse(text).expect("ledger words are well-formed")
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn rot(k: i64) -> MappingClassWord {
    MappingClassWord::new(vec![GenToken::Rotation(k)])
}

struct Builder {
    entries: Vec<IdentityCheck>,
}

impl Builder {
    fn push(&mut self, slug: &str, level: CheckLevel, claim: Claim, cite: &str, note: Option<String>) {
        let id = format!("L{:02}-{slug}", self.entries.len() + 1);
        self.entries.push(IdentityCheck {
            id,
            level,
            claim,
            paper_line: cite.to_string(),
            note,
        });
    }

    fn images(&mut self, slug: &str, level: CheckLevel, w: MappingClassWord, inputs: &[&str], expected: &[&str], cite: &str) {
        self.images_noted(slug, level, w, inputs, expected, cite, None);
    }

    #[allow(clippy::too_many_arguments)]
    fn images_noted(
        &mut self,
        slug: &str,
        level: CheckLevel,
        w: MappingClassWord,
        inputs: &[&str],
        expected: &[&str],
        cite: &str,
        note: Option<String>,
    ) {
        let claim = Claim::Images {
            word: w,
            inputs: names(inputs),
            expected: names(expected),
        };
        self.push(slug, level, claim, cite, note);
    }

    fn equation(&mut self, slug: &str, level: CheckLevel, lhs: &str, rhs: &str, cite: &str) {
        let claim = Claim::Equation {
            lhs: word(lhs),
            rhs: word(rhs),
        };
        self.push(slug, level, claim, cite, None);
    }

    fn telescoping(&mut self, slug: &str, lhs: &str, rhs: &str, cite: &str) {
        self.equation(slug, CheckLevel::Telescoping, lhs, rhs, cite);
    }
}

const CITE_CONJ_C1C2: &str = "by conjugating  $C_1C_{2}^{-1}$ with powers of $T$, one can show that the elements $B_{i}B_{i+1}^{-1}$ and $C_{i}C_{i+1}^{-1}$ are contained in $G$";
const CITE_CONJ_B1C1: &str = "the elements $B_iC_{i}^{-1}$ is contained in $G$ by conjugating with powers of $T$ for all $i=1,\\ldots,r-1$";
const CITE_CONJ_B3: &str = "By conjugating $B_3$ with the powers of $T$, we get $A_1,B_1,C_1,\\ldots B_{r-1},C_{r-1}$ and $B_r$";
const CITE_CONJ_C4C2: &str = "$C_3C_{1}^{-1}$, $C_3C_{5}^{-1}$, $B_4B_{2}^{-1}$ and $C_2A_{1}^{-1}$ are contained in $H$ by conjugating $C_4C_{2}^{-1}$ with some powers of $T$";

/// Builds the ledger for genus `g ≥ 13`.
pub fn build_ledger(g: usize) -> Result<Vec<IdentityCheck>, LedgerError> {
    use CheckLevel::{Homology, Symbolic};
    if g < MIN_REFLECTION_GENUS {
        return Err(LedgerError::UnsupportedGenus(g));
    }
    let odd = g % 2 == 1;
    let r = (g - 1) / 2;
    let gg = g - 3;
    let k = third_index(g);
    let frac = if odd { "\\frac{g-9}{2}" } else { "\\frac{g-8}{2}" };
    let mut b = Builder { entries: Vec::new() };

    // Generating set with T, A1A2^-1, B1B2^-1 (and D_r), E.
    b.images("rot-b1b2", Symbolic, rot(1), &["b1", "b2"], &["c1", "c2"], "T(b_1,b_2)=(c_1,c_2)");

    // Powers of T carrying (c1, c2) to consecutive b or c pairs.
    let mut pairs: Vec<(String, String)> = Vec::new();
    for i in 1..r {
        pairs.push((format!("b{}", i), format!("b{}", i + 1)));
        if i + 1 < r {
            pairs.push((format!("c{}", i), format!("c{}", i + 1)));
        }
    }
    for (x, y) in pairs.iter().filter(|(x, _)| x != "c1") {
        let p = orbit_offset(x).unwrap() - orbit_offset("c1").unwrap();
        let slug = format!("conj-c1c2-{x}{y}");
        b.images_noted(
            &slug,
            Symbolic,
            rot(p),
            &["c1", "c2"],
            &[x, y],
            CITE_CONJ_C1C2,
            Some(format!("power T^{p} derived from the orbit order")),
        );
    }

    b.images(
        "b2b3-a2",
        Homology,
        word("B2 B3^-1 A2 A1^-1"),
        &["b2", "b3"],
        &["a2", "b3"],
        "B_2B_{3}^{-1}A_2A_{1}^{-1}(b_2,b_3)=(a_2,b_3)",
    );
    b.telescoping(
        "tel-a1b2",
        "(A1 A2^-1)(A2 B3^-1)(B3 B2^-1)",
        "A1 B2^-1",
        "(A_1A_{2}^{-1})(A_2B_{3}^{-1})(B_3B_{2}^{-1})=A_{1}B_{2}^{-1}",
    );
    b.images("rot-a1b2", Symbolic, rot(1), &["a1", "b2"], &["b1", "c2"], "T(a_1,b_2)=(b_1,c_2)");
    b.telescoping(
        "tel-b1c1",
        "(B1 C2^-1)(C2 C1^-1)",
        "B1 C1^-1",
        "B_1C_{1}^{-1}=(B_1C_{2}^{-1})(C_2C_{1}^{-1})",
    );
    for i in 2..r {
        let p = 2 * (i as i64 - 1);
        let (bi, ci) = (format!("b{i}"), format!("c{i}"));
        b.images_noted(
            &format!("conj-b1c1-{bi}{ci}"),
            Symbolic,
            rot(p),
            &["b1", "c1"],
            &[&bi, &ci],
            CITE_CONJ_B1C1,
            Some(format!("power T^{p} derived from the orbit order")),
        );
    }
    b.telescoping("tel-a1c1", "(A1 B2^-1)(B2 C1^-1)", "A1 C1^-1", "(A_1B_{2}^{-1})(B_2C_{1}^{-1})=A_1C_{1}^{-1}");
    b.telescoping("tel-c1a2", "(C1 A1^-1)(A1 A2^-1)", "C1 A2^-1", "(C_1A_{1}^{-1})(A_1A_{2}^{-1})=C_1A_{2}^{-1}");
    b.telescoping("tel-c2a1", "(C2 C1^-1)(C1 A1^-1)", "C2 A1^-1", "(C_2C_{1}^{-1})(C_1A_{1}^{-1})=C_2A_{1}^{-1}");
    b.push(
        "def-d1",
        Homology,
        Claim::Definition {
            word: word("(B2 A1^-1)(C1 A2^-1)(C2 A1^-1)"),
            input: "b2".into(),
            defines: "d1".into(),
            fixed: names(&["a1"]),
        },
        "(B_2A_{1}^{-1})(C_1A_{2}^{-1})(C_2A_{1}^{-1})(b_2,a_1)=(d_1,a_1)",
        Some("class of d1 derived from this equation".into()),
    );
    b.push(
        "def-d2",
        Homology,
        Claim::Definition {
            word: word("(A1 B2^-1)(A1 C1^-1)(A1 C2^-1)(A1 B2^-1)"),
            input: "a2".into(),
            defines: "d2".into(),
            fixed: names(&["a1"]),
        },
        "(A_1B_{2}^{-1})(A_1C_{1}^{-1})(A_1C_{2}^{-1})(A_1B_{2}^{-1})(a_2,a_1)=(d_2,a_1)",
        Some("class of d2 derived from this equation".into()),
    );
    b.telescoping("tel-d2c1", "(D2 A1^-1)(A1 C1^-1)", "D2 C1^-1", "(D_2A_{1}^{-1})(A_1C_{1}^{-1})=D_2C_{1}^{-1}");
    b.equation(
        "lantern",
        Homology,
        "A3",
        "(A2 C2^-1)(D1 A1^-1)(D2 C1^-1)",
        "A_3=(A_2C_{2}^{-1})(D_1A_{1}^{-1})(D_2C_{1}^{-1} )",
    );
    b.equation(
        "b3-from-a3",
        Homology,
        "B3",
        "A3 (B3 B1^-1) A3 (B1 B3^-1) A3^-1",
        "B_3=A_3(B_3B_{1}^{-1})A_3(B_1B_{3}^{-1})A_{3}^{-1}",
    );
    let mut orbit_targets: Vec<String> = vec!["a1".into()];
    for i in 1..r {
        orbit_targets.push(format!("b{i}"));
        orbit_targets.push(format!("c{i}"));
    }
    orbit_targets.push(format!("b{r}"));
    for t in orbit_targets.iter().filter(|t| *t != "b3") {
        let p = orbit_offset(t).unwrap() - orbit_offset("b3").unwrap();
        b.images_noted(
            &format!("conj-b3-{t}"),
            Symbolic,
            rot(p),
            &["b3"],
            &[t],
            CITE_CONJ_B3,
            Some(format!("power T^{p} derived from the orbit order")),
        );
    }
    b.telescoping("tel-a2", "(A2 A1^-1) A1", "A2", "A_2=(A_2A_{1}^{-1})A_1");

    // The reflection.
    b.images("sigma-a1", Symbolic, word("S"), &["a1"], &["f"], "\\sigma(a_1)=f");
    if odd {
        let (br, cr1) = (format!("b{r}"), format!("c{}", r - 1));
        b.images("sigma-br", Symbolic, word("S"), &[&br], &[&cr1], "\\sigma(b_r)=c_{r-1}");
    } else {
        let (br, dr) = (format!("b{r}"), format!("d{r}"));
        b.images("sigma-br", Symbolic, word("S"), &[&br], &[&dr], "\\sigma(b_r)=d_r");
    }

    // The three-element generating set.
    let (gam, ck) = (format!("gamma{gg}"), format!("c{k}"));
    let (gam_t, ck_t) = (format!("Gamma{gg}"), format!("C{k}"));
    let even_note = (!odd).then(|| {
        "printed with (g-9)/2 here but (g-8)/2 where the generator is defined; (g-8)/2 is checked".to_string()
    });
    b.images(
        "sigma-fixes",
        Symbolic,
        word("S"),
        &[&gam, &ck],
        &[&gam, &ck],
        &format!("\\sigma(\\gamma_{{g-3}})=\\gamma_{{g-3}} \\textrm{{ and }}\\sigma(c_{{{frac}}})=c_{{{frac}}}"),
    );
    let cite_reverse = format!(
        "\\sigma \\Gamma_{{g-3}}\\sigma =\\Gamma_{{g-3}}^{{-1}} \\textrm{{ and }}\\sigma C_{{{frac}}}\\sigma=C_{{{frac}}}^{{-1}}"
    );
    b.equation("sigma-gamma-sigma", Homology, &format!("S {gam_t} S"), &format!("{gam_t}^-1"), &cite_reverse);
    b.equation("sigma-c-sigma", Homology, &format!("S {ck_t} S"), &format!("{ck_t}^-1"), &cite_reverse);
    let third = format!("S {gam_t} {ck_t}^-1");
    b.push(
        "third-involution",
        Homology,
        Claim::Equation {
            lhs: word(&format!("{third} {third}")),
            rhs: MappingClassWord::identity(),
        },
        if odd {
            "it is easy to verify that  $\\sigma\\Gamma_{g-3}C_{\\frac{g-9}{2}}^{-1}$ is an involution"
        } else {
            "it is easy to show that  $\\sigma\\Gamma_{g-3}C_{\\frac{g-9}{2}}^{-1}$ is an involution"
        },
        even_note,
    );
    b.telescoping(
        "tel-gamma-c",
        &format!("(S)({third})"),
        &format!("{gam_t} {ck_t}^-1"),
        &format!("\\Gamma_{{g-3}}C_{{{frac}}}^{{-1}}=(\\sigma)(\\sigma\\Gamma_{{g-3}}C_{{{frac}}}^{{-1}})"),
    );
    b.images(
        "rot-gamma-c2",
        Symbolic,
        rot(13 - g as i64),
        &[&gam, &ck],
        &["gamma10", "c2"],
        &format!("T^{{13-g}}(\\gamma_{{g-3}},c_{{{frac}}})=(\\gamma_{{10}},c_{{2}})"),
    );
    b.images("rot-gamma10", Symbolic, rot(-4), &["gamma10", "c2"], &["gamma6", "a1"], "T^{-4}(\\gamma_{10},c_2)=(\\gamma_{6},a_{1})");
    b.images("rot-gamma6", Symbolic, rot(2), &["gamma6", "a1"], &["gamma8", "c1"], "T^{2}(\\gamma_{6},a_1)=(\\gamma_{8},c_{1})");
    b.images(
        "gamma6-c2a1",
        Homology,
        word("(Gamma6 A1^-1)(C2 Gamma10^-1)"),
        &["gamma6", "a1"],
        &["c2", "a1"],
        "(\\Gamma_6A_{1}^{-1})(C_2\\Gamma_{10}^{-1})(\\gamma_6,a_1)=(c_2,a_1)",
    );
    b.telescoping(
        "tel-gamma6c2",
        "(Gamma6 A1^-1)(A1 C2^-1)",
        "Gamma6 C2^-1",
        "(\\Gamma_6A_{1}^{-1})(A_1C_{2}^{-1})=\\Gamma_6C_{2}^{-1}",
    );
    b.images("rot-gamma6c2", Symbolic, rot(4), &["gamma6", "c2"], &["gamma10", "c4"], "T^4(\\gamma_6,c_2)=(\\gamma_{10},c_4)");
    b.telescoping(
        "tel-c4c2",
        "(C4 Gamma10^-1)(Gamma10 C2^-1)",
        "C4 C2^-1",
        "(C_4\\Gamma_{10}^{-1})( \\Gamma_{10}C_{2}^{-1})=C_4C_{2}^{-1}",
    );
    for (p, x, y) in [(-2, "c3", "c1"), (2, "c5", "c3"), (-1, "b4", "b2"), (-4, "c2", "a1")] {
        b.images_noted(
            &format!("conj-c4c2-{x}{y}"),
            Symbolic,
            rot(p),
            &["c4", "c2"],
            &[x, y],
            CITE_CONJ_C4C2,
            Some(format!("power T^{p} derived from the orbit order")),
        );
    }
    b.images(
        "c4b4-b2a1",
        Homology,
        word("(C4 C2^-1)(B4 B2^-1)"),
        &["c2", "a1"],
        &["b2", "a1"],
        "(C_4C_{2}^{-1})(B_4B_{2}^{-1})(c_2,a_1)=(b_2,a_1)",
    );
    b.telescoping("tel-c2b2", "(C2 A1^-1)(A1 B2^-1)", "C2 B2^-1", "(C_{2}A_{1}^{-1})(A_1B_{2}^{-1})=C_{2}B_{2}^{-1}");
    b.images(
        "c1c3b2b4",
        Homology,
        word("C1 C3^-1 B2 B4^-1"),
        &["c3", "c5"],
        &["b4", "c5"],
        "C_1C_{3}^{-1}B_2B_{4}^{-1}(c_3,c_5)=(b_4,c_5)",
    );
    b.images("rot-b4c5", Symbolic, rot(-4), &["b4", "c5"], &["b2", "c3"], "T^{-4}(b_4,c_5)=(b_2,c_3)");
    b.telescoping("tel-c2c3", "(C2 B2^-1)(B2 C3^-1)", "C2 C3^-1", "C_2C_{3}^{-1}=(C_2B_{2}^{-1})(B_2C_{3}^{-1})");
    b.images_noted(
        "rot-b2c3-printed",
        Symbolic,
        rot(-2),
        &["b2", "c3"],
        &["b1", "b2"],
        "T^{-2}(b_2,c_3)=(b_1,b_{2})",
        Some("as printed; T^-2 sends c3 to c2, so this cannot hold alongside the other rotation claims".into()),
    );
    b.images_noted(
        "rot-c2c3",
        Symbolic,
        rot(-3),
        &["c2", "c3"],
        &["b1", "b2"],
        "T^{-2}(b_2,c_3)=(b_1,b_{2})",
        Some("reading that yields B1B2^-1 from the preceding C2C3^-1: T^-3(c2,c3)=(b1,b2)".into()),
    );
    b.telescoping(
        "tel-gamma8b4",
        "(Gamma8 C1^-1)(C1 C3^-1)(C3 C5^-1)(C5 B4^-1)",
        "Gamma8 B4^-1",
        "(\\Gamma_8C_{1}^{-1})(C_1C_{3}^{-1})(C_3C_{5}^{-1})(C_5B_{4}^{-1})=\\Gamma_8B_{4}^{-1}",
    );
    b.images("rot-gamma8b4", Symbolic, rot(-7), &["gamma8", "b4"], &["gamma1", "a1"], "T^{-7}(\\gamma_8,b_4)=(\\gamma_1,a_{1})");
    b.images(
        "gamma1-is-a2",
        Symbolic,
        MappingClassWord::identity(),
        &["gamma1", "a1"],
        &["a2", "a1"],
        "(\\gamma_1,a_{1})=(a_2,a_1)",
    );
    b.images("a1-sigma-e", Homology, word("A1 S"), &["a1"], &["e"], "A_1\\sigma(a_1)=A_1(f)=e");
    b.images("a1-f-e", Homology, word("A1"), &["f"], &["e"], "A_1\\sigma(a_1)=A_1(f)=e");
    Ok(b.entries)
}

/// Runs every entry in order. Derived classes from definition entries are
/// available to later entries.
pub fn run_ledger(
    ledger: &[IdentityCheck],
    table: &CurveTable,
) -> Result<Vec<CheckOutcome>, LedgerError> {
    let mut ctx = ClassContext::new(table);
    let mut out = Vec::with_capacity(ledger.len());
    for entry in ledger {
        let wrap = |source: HomologyError| LedgerError::Entry {
            id: entry.id.clone(),
            source,
        };
        let (pass, detail) = run_entry(entry, &mut ctx).map_err(wrap)?;
        out.push(CheckOutcome {
            id: entry.id.clone(),
            level: entry.level,
            statement: entry.statement(),
            paper_line: entry.paper_line.clone(),
            pass,
            detail,
            note: entry.note.clone(),
        });
    }
    Ok(out)
}

/// Builds and runs the ledger for the table's genus.
pub fn run_ledger_for(table: &CurveTable) -> Result<Vec<CheckOutcome>, LedgerError> {
    run_ledger(&build_ledger(table.genus())?, table)
}

fn support(v: &BitVec) -> String {
    let idx: Vec<String> = v.support().iter().map(|i| format!("x{}", i + 1)).collect();
    if idx.is_empty() {
        "0".into()
    } else {
        idx.join("+")
    }
}

fn run_entry(entry: &IdentityCheck, ctx: &mut ClassContext<'_>) -> Result<(bool, Option<String>), HomologyError> {
    match (&entry.claim, entry.level) {
        (Claim::Images { word, inputs, expected }, CheckLevel::Symbolic) => {
            symbolic_images(word, inputs, expected, ctx.table)
        }
        (Claim::Images { word, inputs, expected }, _) => {
            let m = eval_word_in(word, ctx)?;
            let mut bad = Vec::new();
            for (i, e) in inputs.iter().zip(expected) {
                let got = m.apply(&ctx.class(i)?)?;
                let want = ctx.class(e)?;
                if got != want {
                    bad.push(format!("{i} -> {} but {e} = {}", support(&got), support(&want)));
                }
            }
            Ok((bad.is_empty(), (!bad.is_empty()).then(|| bad.join("; "))))
        }
        (Claim::Equation { lhs, rhs }, CheckLevel::Telescoping) => {
            let (l, r) = (lhs.reduce(), rhs.reduce());
            let pass = l == r;
            Ok((pass, (!pass).then(|| format!("reduces to {l} vs {r}"))))
        }
        (Claim::Equation { lhs, rhs }, _) => {
            let l = eval_word_in(lhs, ctx)?;
            let r = eval_word_in(rhs, ctx)?;
            if l == r {
                return Ok((true, None));
            }
            let diffs: Vec<String> = (0..ctx.genus())
                .filter(|&j| l.column(j) != r.column(j))
                .map(|j| format!("x{}: {} vs {}", j + 1, support(&l.column(j)), support(&r.column(j))))
                .collect();
            Ok((false, Some(format!("actions differ on {}", diffs.join("; ")))))
        }
        (Claim::Definition { word, input, defines, fixed }, _) => {
            let m = eval_word_in(word, ctx)?;
            let class = m.apply(&ctx.class(input)?)?;
            let mut problems = Vec::new();
            if class.dot(&class)? {
                problems.push(format!("{defines} = {} is not isotropic", support(&class)));
            }
            if class.is_zero() {
                problems.push(format!("{defines} has zero class"));
            }
            for f in fixed {
                let v = ctx.class(f)?;
                let img = m.apply(&v)?;
                if img != v {
                    problems.push(format!("{f} -> {} is not fixed", support(&img)));
                }
            }
            ctx.derived.insert(defines.clone(), class);
            let detail = format!("{defines} = {}", support(&class));
            if problems.is_empty() {
                Ok((true, Some(detail)))
            } else {
                Ok((false, Some(format!("{detail}; {}", problems.join("; ")))))
            }
        }
    }
}

/// Applies a σ/T word to traces (last token first) and compares normalized
/// traces, so curves that share a trace under different names agree.
fn symbolic_images(
    word: &MappingClassWord,
    inputs: &[String],
    expected: &[String],
    table: &CurveTable,
) -> Result<(bool, Option<String>), HomologyError> {
    if !word.is_symmetry_word() {
        return Err(HomologyError::Parse {
            token: word.to_string(),
            reason: "symbolic entries accept only S and T tokens".into(),
        });
    }
    let model = table.model();
    let mut maps = Vec::new();
    for tok in word.tokens.iter().rev() {
        maps.push(match tok {
            GenToken::Sigma => model.reflection_map()?,
            GenToken::Rotation(k) => model.rotation_map(*k),
            GenToken::Twist { .. } => unreachable!(),
        });
    }
    let mut bad = Vec::new();
    for (i, e) in inputs.iter().zip(expected) {
        let mut trace = table.get(i)?.trace.clone();
        for m in &maps {
            trace = trace.iter().map(|&l| m[l]).collect();
        }
        let image = normalize_trace(&trace);
        if image != table.normalized(e)? {
            let name = table
                .lookup_trace(&image)
                .map(str::to_string)
                .unwrap_or_else(|| "no named curve".into());
            bad.push(format!("{i} -> {image:?} ({name}), expected {e}"));
        }
    }
    Ok((bad.is_empty(), (!bad.is_empty()).then(|| bad.join("; "))))
}
