//! Mapping classes acting on `H₁(N_g; Z₂) ≅ Z₂^g`.
//!
//! Dehn twists act as transvections `v ↦ v + (v·a)a`, the reflection and the
//! rotation as permutation matrices. Words are products written left to right
//! and evaluated right to left: the last token acts first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BitMat, BitVec, Gf2Error};
use crate::surface::{self, CrosscapModel, CurveTable, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("cannot parse token {token:?}: {reason}")]
    Parse { token: String, reason: String },
    #[error("class of {0} is not isotropic")]
    NonIsotropic(String),
    #[error("no class for curve {0}")]
    Unresolved(String),
    #[error("genus mismatch: word needs {expected}, got {found}")]
    GenusMismatch { expected: usize, found: usize },
    #[error("signed action fails its order identity: {0}")]
    SignConvention(String),
}

/// One letter of a mapping-class word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GenToken {
    /// Twist about a named curve; `inverse` marks exponent −1.
    Twist { name: String, inverse: bool },
    /// The reflection σ, written `S`.
    Sigma,
    /// `T^k`.
    Rotation(i64),
}

impl GenToken {
    pub fn twist(name: &str) -> Self {
        GenToken::Twist {
            name: name.to_string(),
            inverse: false,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GenToken::Twist { name, inverse } => GenToken::Twist {
                name: name.clone(),
                inverse: !inverse,
            },
            GenToken::Sigma => GenToken::Sigma,
            GenToken::Rotation(k) => GenToken::Rotation(-k),
        }
    }

    /// True for words built from σ and rotations only.
    pub fn is_symmetry(&self) -> bool {
        !matches!(self, GenToken::Twist { .. })
    }
}

impl fmt::Display for GenToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenToken::Twist { name, inverse } => {
                let mut chars = name.chars();
                if let Some(first) = chars.next() {
                    write!(f, "{}{}", first.to_ascii_uppercase(), chars.as_str())?;
                }
                if *inverse {
                    write!(f, "^-1")?;
                }
                Ok(())
            }
            GenToken::Sigma => write!(f, "S"),
            GenToken::Rotation(1) => write!(f, "T"),
            GenToken::Rotation(k) => write!(f, "T^{k}"),
        }
    }
}

impl FromStr for GenToken {
    type Err = HomologyError;

    /// Grammar: `S`, `T`, `T^k` (`k` a signed integer), or a twist `X` / `X^-1`
    /// where `X` is an uppercase letter other than `S`, `T` followed by an
    /// optional index, or `Gamma` followed by an index. Twist names are
    /// lowercased on the first letter: `Gamma10` names curve `gamma10`.
    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| HomologyError::Parse {
            token: tok.to_string(),
            reason: reason.to_string(),
        };
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b, Some(e)),
            None => (tok, None),
        };
        if base == "T" {
            let k = match exp {
                None => 1,
                Some(e) => e.parse::<i64>().map_err(|_| err("bad rotation power"))?,
            };
            return Ok(GenToken::Rotation(k));
        }
        let inverse = match exp {
            None | Some("1") => false,
            Some("-1") => true,
            Some(_) => return Err(err("exponent must be 1 or -1")),
        };
        if base == "S" {
            return Ok(GenToken::Sigma);
        }
        let (head, index) = if let Some(rest) = base.strip_prefix("Gamma") {
            ("gamma", rest)
        } else {
            let mut chars = base.chars();
            match chars.next() {
                Some(c) if c.is_ascii_uppercase() => (&base[..1], chars.as_str()),
                _ => return Err(err("expected S, T, Gamma<i> or an uppercase curve letter")),
            }
        };
        if !index.chars().all(|c| c.is_ascii_digit()) || (head == "gamma" && index.is_empty()) {
            return Err(err("curve index must be decimal digits"));
        }
        Ok(GenToken::Twist {
            name: format!("{}{}", head.to_ascii_lowercase(), index),
            inverse,
        })
    }
}

/// A product of generators, written left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MappingClassWord {
    pub tokens: Vec<GenToken>,
}

impl MappingClassWord {
    pub fn new(tokens: Vec<GenToken>) -> Self {
        Self { tokens }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Parses whitespace-separated tokens; `|`, `(` and `)` are ignored.
    pub fn parse(text: &str) -> Result<Self, HomologyError> {
        let cleaned: String = text
            .chars()
            .map(|c| if matches!(c, '|' | '(' | ')') { ' ' } else { c })
            .collect();
        let tokens = cleaned
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { tokens })
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut tokens = self.tokens.clone();
        tokens.extend(other.tokens.iter().cloned());
        Self { tokens }
    }

    pub fn inverse(&self) -> Self {
        Self {
            tokens: self.tokens.iter().rev().map(GenToken::inverse).collect(),
        }
    }

    pub fn is_symmetry_word(&self) -> bool {
        self.tokens.iter().all(GenToken::is_symmetry)
    }

    /// Free reduction: cancels `X X^-1`, `S S`, and merges adjacent rotations.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<GenToken> = Vec::with_capacity(self.tokens.len());
        for tok in &self.tokens {
            match (out.last(), tok) {
                (Some(GenToken::Rotation(a)), GenToken::Rotation(b)) => {
                    let k = a + b;
                    out.pop();
                    if k != 0 {
                        out.push(GenToken::Rotation(k));
                    }
                }
                (_, GenToken::Rotation(0)) => {}
                (Some(last), _) if *last == tok.inverse() => {
                    out.pop();
                }
                _ => out.push(tok.clone()),
            }
        }
        Self { tokens: out }
    }

    /// Names of all twisted curves, in order of first appearance.
    pub fn curve_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for t in &self.tokens {
            if let GenToken::Twist { name, .. } = t {
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
        }
        names
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for MappingClassWord {
    type Err = HomologyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Resolves curve names to classes: the table first, then derived classes.
#[derive(Debug, Clone)]
pub struct ClassContext<'a> {
    pub table: &'a CurveTable,
    pub derived: BTreeMap<String, BitVec>,
}

impl<'a> ClassContext<'a> {
    pub fn new(table: &'a CurveTable) -> Self {
        Self {
            table,
            derived: BTreeMap::new(),
        }
    }

    pub fn class(&self, name: &str) -> Result<BitVec, HomologyError> {
        if let Some(v) = self.derived.get(name) {
            return Ok(*v);
        }
        if self.table.contains(name) {
            return Ok(surface::curve_class(self.table, name)?);
        }
        Err(HomologyError::Unresolved(name.to_string()))
    }

    pub fn genus(&self) -> usize {
        self.table.genus()
    }
}

/// `v ↦ v + (v·a)a`.
pub fn transvection(class: &BitVec) -> Result<BitMat, HomologyError> {
    if class.dot(class)? {
        return Err(HomologyError::NonIsotropic(format!("{class:?}")));
    }
    let a = class.bits();
    let dim = class.dim();
    let rows = (0..dim)
        .map(|i| {
            // Row i of I + a·aᵀ.
            let base = 1u64 << i;
            if (a >> i) & 1 == 1 {
                base ^ a
            } else {
                base
            }
        })
        .collect();
    Ok(BitMat::from_row_bits(dim, rows)?)
}

/// Permutation matrix of a 1-based label map (index 0 unused).
pub fn label_permutation(map: &[usize]) -> Result<BitMat, HomologyError> {
    let perm: Vec<usize> = map[1..].iter().map(|&j| j - 1).collect();
    Ok(BitMat::permutation(&perm)?)
}

/// `T^k` on homology.
pub fn rotation_matrix(model: &CrosscapModel, k: i64) -> Result<BitMat, HomologyError> {
    label_permutation(&model.rotation_map(k))
}

/// σ on homology.
pub fn sigma_matrix(model: &CrosscapModel) -> Result<BitMat, HomologyError> {
    label_permutation(&model.reflection_map()?)
}

/// Matrix of one token.
pub fn token_matrix(tok: &GenToken, ctx: &ClassContext<'_>) -> Result<BitMat, HomologyError> {
    let model = ctx.table.model();
    match tok {
        GenToken::Twist { name, .. } => transvection(&ctx.class(name)?),
        GenToken::Sigma => sigma_matrix(model),
        GenToken::Rotation(k) => rotation_matrix(model, *k),
    }
}

/// Product of the token matrices in written order.
pub fn eval_word_in(word: &MappingClassWord, ctx: &ClassContext<'_>) -> Result<BitMat, HomologyError> {
    let mut acc = BitMat::identity(ctx.genus())?;
    for tok in &word.tokens {
        acc = acc.mul(&token_matrix(tok, ctx)?)?;
    }
    Ok(acc)
}

/// [`eval_word_in`] with classes from the table only.
pub fn eval_word(word: &MappingClassWord, table: &CurveTable) -> Result<BitMat, HomologyError> {
    eval_word_in(word, &ClassContext::new(table))
}

/// True iff `MᵀM = I`, i.e. `M` preserves the identity-form pairing.
pub fn is_isometry(m: &BitMat) -> bool {
    m.transpose().mul_unchecked(m).is_identity()
}

/// Checks `F·T_a·F⁻¹ = T_{F(a)}` for `F = eval(f)`.
pub fn conjugation_check(
    f: &MappingClassWord,
    a: &str,
    ctx: &ClassContext<'_>,
) -> Result<bool, HomologyError> {
    let fm = eval_word_in(f, ctx)?;
    let class = ctx.class(a)?;
    let lhs = fm.mul(&transvection(&class)?)?.mul(&fm.inverse()?)?;
    let rhs = transvection(&fm.apply(&class)?)?;
    Ok(lhs == rhs)
}

/// Integer matrix acting on `H₁(N_g; R)` in the basis `x₁..x_{g−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMat {
    dim: usize,
    /// Row-major entries.
    entries: Vec<i64>,
}

impl SignedMat {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self { dim: n, entries }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        let n = self.dim;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| i128::from(self.get(i, j))).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }
}

/// `x_i ↦ ε·x_{π(i)}` on `H₁(N_g; R)` with `x_g = −(x₁ + … + x_{g−1})`.
pub fn signed_permutation(map: &[usize], epsilon: i64) -> SignedMat {
    let g = map.len() - 1;
    let n = g - 1;
    let mut m = SignedMat {
        dim: n,
        entries: vec![0; n * n],
    };
    for j in 1..=n {
        let target = map[j];
        if target == g {
            for i in 0..n {
                m.entries[i * n + (j - 1)] = -epsilon;
            }
        } else {
            m.entries[(target - 1) * n + (j - 1)] = epsilon;
        }
    }
    m
}

/// σ on real homology. σ reverses the orientation of every one-sided `x_i`,
/// so each generator picks up `ε = −1`.
pub fn sigma_signed(model: &CrosscapModel) -> Result<SignedMat, HomologyError> {
    let m = signed_permutation(&model.reflection_map()?, -1);
    if !m.mul(&m).is_identity() {
        return Err(HomologyError::SignConvention("sigma squared is not the identity".into()));
    }
    Ok(m)
}

/// `T` on real homology; the rotation preserves orientation (`ε = +1`).
pub fn rotation_signed(model: &CrosscapModel) -> Result<SignedMat, HomologyError> {
    let m = signed_permutation(&model.rotation_map(1), 1);
    if !m.pow(model.rotation_order() as u32).is_identity() {
        return Err(HomologyError::SignConvention(
            "rotation to its order is not the identity".into(),
        ));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_model, default_table};

    fn w(s: &str) -> MappingClassWord {
        MappingClassWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let word = w("A2 C2^-1 | D1 A1^-1 | D2 C1^-1");
        assert_eq!(word.tokens.len(), 6);
        assert_eq!(word.to_string(), "A2 C2^-1 D1 A1^-1 D2 C1^-1");
        assert_eq!(w("S Gamma10 C2^-1").tokens[1], GenToken::twist("gamma10"));
        assert_eq!(w("T^-4").tokens[0], GenToken::Rotation(-4));
        assert_eq!(w("T").tokens[0], GenToken::Rotation(1));
        assert_eq!(w("E").tokens[0], GenToken::twist("e"));
        assert!(MappingClassWord::parse("x1").is_err());
        assert!(MappingClassWord::parse("A1^2").is_err());
        assert!(MappingClassWord::parse("Gamma").is_err());
        assert_eq!(w("").to_string(), "1");
    }

    #[test]
    fn free_reduction() {
        let lhs = w("A1 A2^-1 | A2 B3^-1 | B3 B2^-1");
        assert_eq!(lhs.reduce(), w("A1 B2^-1"));
        assert_eq!(w("S S Gamma10").reduce(), w("Gamma10"));
        assert_eq!(w("T^2 T^-2").reduce(), w(""));
        assert_eq!(w("T T^3").reduce(), w("T^4"));
        assert_eq!(w("A1 B1").reduce(), w("A1 B1"));
    }

    #[test]
    fn transvection_examples() {
        let z = BitVec::zero(4).unwrap();
        assert!(transvection(&z).unwrap().is_identity());
        let a = BitVec::from_indices(4, &[0, 1]).unwrap();
        let t = transvection(&a).unwrap();
        let e1 = BitVec::unit(4, 0).unwrap();
        assert_eq!(t.apply(&e1).unwrap(), BitVec::unit(4, 1).unwrap());
        let v = BitVec::from_indices(4, &[2, 3]).unwrap();
        assert_eq!(t.apply(&v).unwrap(), v);
        assert!(transvection(&e1).is_err());
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometry(&BitMat::identity(5).unwrap()));
        let a = BitVec::from_indices(5, &[0, 3]).unwrap();
        assert!(is_isometry(&transvection(&a).unwrap()));
        // Adds coordinate 0 into coordinate 1.
        let m = BitMat::from_row_bits(3, vec![0b001, 0b011, 0b100]).unwrap();
        assert!(!is_isometry(&m));
    }

    #[test]
    fn eval_examples() {
        let t = default_table(13).unwrap();
        assert!(eval_word(&w(""), &t).unwrap().is_identity());
        assert!(eval_word(&w("S S"), &t).unwrap().is_identity());
        let inv = eval_word(&w("S Gamma10 C2^-1 S Gamma10 C2^-1"), &t).unwrap();
        assert!(inv.is_identity());
        assert_eq!(eval_word(&w("T^13"), &t).unwrap().order().unwrap(), 1);
        assert!(eval_word(&w("Q7"), &t).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let t = default_table(13).unwrap();
        let ctx = ClassContext::new(&t);
        assert!(conjugation_check(&w("T"), "b1", &ctx).unwrap());
        assert!(conjugation_check(&w(""), "b1", &ctx).unwrap());
        assert!(conjugation_check(&w("A1 B2 S T^3 C4^-1"), "b2", &ctx).unwrap());
        let tm = eval_word(&w("T"), &t).unwrap();
        let b1 = surface::curve_class(&t, "b1").unwrap();
        let c1 = surface::curve_class(&t, "c1").unwrap();
        assert_eq!(tm.apply(&b1).unwrap(), c1);
    }

    #[test]
    fn determinants() {
        for g in [13, 14, 15, 16] {
            let m = build_model(g).unwrap();
            let s = sigma_signed(&m).unwrap();
            let r = rotation_signed(&m).unwrap();
            assert_eq!(s.det(), 1, "sigma g={g}");
            assert_eq!(r.det(), 1, "T g={g}");
            assert!(s.mul(&s).is_identity());
        }
    }

    #[test]
    fn bareiss_matches_small_cases() {
        let m = SignedMat {
            dim: 3,
            entries: vec![2, 0, 1, 1, 3, 2, 1, 1, 1],
        };
        assert_eq!(m.det(), 2 * (3 - 2) - 0 + (1 - 3));
        let swap = signed_permutation(&[0, 2, 1, 3], 1);
        assert_eq!(swap.det(), -1);
        assert_eq!(SignedMat::identity(4).det(), 1);
    }
}
