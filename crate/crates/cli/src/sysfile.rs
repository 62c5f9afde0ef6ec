//! Line-oriented system files.
//!
//! ```text
//! # comment
//! kind = mahler
//! q = 2
//! rank = 2
//! A[1][1] = 1 + z
//! A[2][2] = (1 + z)^2
//! f0[1] = 1
//! ```
//!
//! Header lines are `key = value` with a bare identifier key; entry lines
//! carry 1-based bracketed indices. Entry names in use: `A[i][j]` (Mahler
//! matrix), `A<n>[i][j]` (level-n connection matrix), `f0[i]` (initial
//! vector), `f[i]` (rational functions for relation search).

use std::collections::BTreeMap;

use idalg::exactnum::{BigRational, PrimeFieldElem, PrimeModulus, Rationals};
use idalg::idmod::IDModule;
use idalg::mahler::MahlerSystem;
use idalg::polyseries::RatFun;
use thiserror::Error;

use crate::parse::{parse_expr, ParseError};

#[derive(Debug, Error)]
pub enum SysFileError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ParseError },
    #[error("missing header '{0}'")]
    MissingHeader(&'static str),
    #[error("invalid header '{key}': {message}")]
    Header { key: String, message: String },
    #[error("expected kind '{expected}', file declares '{found}'")]
    Kind { expected: String, found: String },
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    Build(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    /// Zero-based after parsing.
    pub index: Vec<usize>,
    pub expr: String,
    pub line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SystemFile {
    pub header: BTreeMap<String, String>,
    pub entries: Vec<Entry>,
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_target(lhs: &str, line: usize) -> Result<(String, Vec<usize>), SysFileError> {
    let bad = |message: String| SysFileError::Format { line, message };
    let open = lhs.find('[').expect("caller checked");
    let name = lhs[..open].trim().to_string();
    if !is_ident(&name) {
        return Err(bad(format!("invalid entry name '{name}'")));
    }
    let mut rest = lhs[open..].trim();
    let mut index = Vec::new();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('[') else {
            return Err(bad(format!("unexpected '{rest}' after indices")));
        };
        let close = body.find(']').ok_or_else(|| bad("unclosed '['".into()))?;
        let k: usize = body[..close].trim().parse().map_err(|_| bad(format!("invalid index '{}'", &body[..close])))?;
        if k == 0 {
            return Err(bad("indices are 1-based".into()));
        }
        index.push(k - 1);
        rest = body[close + 1..].trim_start();
    }
    Ok((name, index))
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, SysFileError> {
        let mut out = SystemFile::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((lhs, rhs)) = content.split_once('=') else {
                return Err(SysFileError::Format { line, message: "expected 'key = value'".into() });
            };
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if rhs.is_empty() {
                return Err(SysFileError::Format { line, message: "empty value".into() });
            }
            if lhs.contains('[') {
                let (name, index) = parse_target(lhs, line)?;
                if out.entries.iter().any(|e| e.name == name && e.index == index) {
                    return Err(SysFileError::Format { line, message: format!("duplicate entry {lhs}") });
                }
                out.entries.push(Entry { name, index, expr: rhs.to_string(), line });
            } else {
                if !is_ident(lhs) {
                    return Err(SysFileError::Format { line, message: format!("invalid key '{lhs}'") });
                }
                if out.header.insert(lhs.to_string(), rhs.to_string()).is_some() {
                    return Err(SysFileError::Format { line, message: format!("duplicate header '{lhs}'") });
                }
            }
        }
        Ok(out)
    }

    pub fn kind(&self) -> Option<&str> {
        self.header.get("kind").map(String::as_str)
    }

    pub fn expect_kind(&self, expected: &[&str]) -> Result<String, SysFileError> {
        let found = self.kind().ok_or(SysFileError::MissingHeader("kind"))?;
        if expected.contains(&found) {
            Ok(found.to_string())
        } else {
            Err(SysFileError::Kind { expected: expected.join(" | "), found: found.into() })
        }
    }

    pub fn get_u64(&self, key: &'static str) -> Result<Option<u64>, SysFileError> {
        self.header
            .get(key)
            .map(|v| v.parse().map_err(|_| SysFileError::Header { key: key.into(), message: format!("'{v}' is not a natural number") }))
            .transpose()
    }

    pub fn require_u64(&self, key: &'static str) -> Result<u64, SysFileError> {
        self.get_u64(key)?.ok_or(SysFileError::MissingHeader(key))
    }

    fn check_field(&self, want_prime: bool) -> Result<(), SysFileError> {
        let field = self.header.get("field").map(String::as_str);
        match (field, want_prime) {
            (None, _) | (Some("Q"), false) | (Some("Fp"), true) => Ok(()),
            (Some(other), _) => Err(SysFileError::Header {
                key: "field".into(),
                message: format!("'{other}' not supported here (expected {})", if want_prime { "Fp" } else { "Q" }),
            }),
        }
    }

    fn named(&self, name: &str) -> impl Iterator<Item = &Entry> {
        let name = name.to_string();
        self.entries.iter().filter(move |e| e.name == name)
    }

    fn check_names(&self, allowed: impl Fn(&str) -> bool) -> Result<(), SysFileError> {
        match self.entries.iter().find(|e| !allowed(&e.name)) {
            Some(e) => Err(SysFileError::Format { line: e.line, message: format!("unexpected entry '{}'", e.name) }),
            None => Ok(()),
        }
    }

    fn q_matrix(&self, name: &str, rank: usize) -> Result<Vec<Vec<RatFun<BigRational>>>, SysFileError> {
        let mut a = vec![vec![RatFun::zero(&Rationals); rank]; rank];
        for e in self.named(name) {
            let [i, j] = shape2(e, rank)?;
            a[i][j] = parse_expr(&e.expr, &Rationals).map_err(|source| SysFileError::Expr { line: e.line, source })?;
        }
        Ok(a)
    }

    fn q_vector(&self, name: &str, len: usize) -> Result<Option<Vec<RatFun<BigRational>>>, SysFileError> {
        let mut v = vec![RatFun::zero(&Rationals); len];
        let mut any = false;
        for e in self.named(name) {
            let i = shape1(e, len)?;
            v[i] = parse_expr(&e.expr, &Rationals).map_err(|source| SysFileError::Expr { line: e.line, source })?;
            any = true;
        }
        Ok(any.then_some(v))
    }

    /// Mahler system plus the optional initial vector `f0`.
    pub fn mahler(&self) -> Result<(MahlerSystem, Option<Vec<BigRational>>), SysFileError> {
        self.expect_kind(&["mahler"])?;
        self.check_field(false)?;
        self.check_names(|n| n == "A" || n == "f0")?;
        let q = self.require_u64("q")?;
        let rank = self.require_u64("rank")? as usize;
        let a = self.q_matrix("A", rank)?;
        let sys = MahlerSystem::new(q, a).map_err(|e| SysFileError::Build(e.to_string()))?;
        let f0 = self.q_vector("f0", rank)?;
        if let Some(v) = &f0 {
            if let Some(e) = self.named("f0").find(|e| v[e.index[0]].as_constant().is_none()) {
                return Err(SysFileError::Format { line: e.line, message: "f0 entries must be constants".into() });
            }
        }
        let f0 = f0.map(|v| v.iter().map(|f| f.as_constant().expect("checked")).collect());
        Ok((sys, f0))
    }

    /// Rational functions `f[1..n]` for relation search.
    pub fn functions(&self) -> Result<Vec<RatFun<BigRational>>, SysFileError> {
        self.expect_kind(&["series"])?;
        self.check_field(false)?;
        self.check_names(|n| n == "f")?;
        let n = self.named("f").map(|e| e.index.first().copied().unwrap_or(0) + 1).max().unwrap_or(0);
        if n == 0 {
            return Err(SysFileError::Shape("no f[i] entries".into()));
        }
        let v = self.q_vector("f", n)?.expect("nonempty");
        if let Some(missing) = (0..n).find(|&i| !self.named("f").any(|e| e.index == [i])) {
            return Err(SysFileError::Shape(format!("missing entry f[{}]", missing + 1)));
        }
        Ok(v)
    }

    /// Iterative differential module over `F_p(t)` from `A0 .. A<m>`.
    pub fn idmodule(&self) -> Result<IDModule, SysFileError> {
        self.expect_kind(&["idmod"])?;
        self.check_field(true)?;
        let p = self.require_u64("p")?;
        let rank = self.require_u64("rank")? as usize;
        let m = PrimeModulus::new(p).map_err(|e| SysFileError::Header { key: "p".into(), message: e.to_string() })?;
        let level_of = |name: &str| name.strip_prefix('A').and_then(|s| s.parse::<usize>().ok());
        self.check_names(|n| level_of(n).is_some())?;
        let top = self.entries.iter().filter_map(|e| level_of(&e.name)).max();
        let levels = match self.get_u64("level")? {
            Some(l) => l as usize + 1,
            None => top.map_or(1, |t| t + 1),
        };
        if let Some(t) = top.filter(|&t| t >= levels) {
            return Err(SysFileError::Shape(format!("entry A{t} exceeds declared level {}", levels - 1)));
        }
        let mut mats = Vec::with_capacity(levels);
        for n in 0..levels {
            let mut a = vec![vec![RatFun::<PrimeFieldElem>::zero(&m); rank]; rank];
            for e in self.named(&format!("A{n}")) {
                let [i, j] = shape2(e, rank)?;
                a[i][j] = parse_expr(&e.expr, &m).map_err(|source| SysFileError::Expr { line: e.line, source })?;
            }
            mats.push(a);
        }
        IDModule::new(p, mats).map_err(|e| SysFileError::Build(e.to_string()))
    }
}

fn shape1(e: &Entry, len: usize) -> Result<usize, SysFileError> {
    match e.index[..] {
        [i] if i < len => Ok(i),
        _ => Err(SysFileError::Format { line: e.line, message: format!("{} index out of range for length {len}", e.name) }),
    }
}

fn shape2(e: &Entry, rank: usize) -> Result<[usize; 2], SysFileError> {
    match e.index[..] {
        [i, j] if i < rank && j < rank => Ok([i, j]),
        _ => Err(SysFileError::Format { line: e.line, message: format!("{} needs two indices within rank {rank}", e.name) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAHLER: &str = "\
# f(z) = A(z) f(z^2)
kind = mahler
q = 2
rank = 2
A[1][1] = 1 + z
A[2][2] = (1 + z)^2   # squared
f0[1] = 1
f0[2] = 1
";

    #[test]
    fn parses_mahler_file() {
        let sf = SystemFile::parse(MAHLER).unwrap();
        assert_eq!(sf.kind(), Some("mahler"));
        assert_eq!(sf.entries.len(), 4);
        assert_eq!(sf.entries[1].index, vec![1, 1]);
        let (sys, f0) = sf.mahler().unwrap();
        assert_eq!(sys.q(), 2);
        assert_eq!(sys.rank(), 2);
        assert_eq!(f0.unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_lines() {
        let err = |t: &str| SystemFile::parse(t).unwrap_err().to_string();
        assert_eq!(err("kind = mahler\nA[0][1] = 1"), "line 2: indices are 1-based");
        assert_eq!(err("q 2"), "line 1: expected 'key = value'");
        assert!(err("q = 2\nq = 3").contains("duplicate header"));
        let sf = SystemFile::parse("kind = mahler\nq = 2\nrank = 1\nA[1][1] = 1/(z - z)").unwrap();
        assert_eq!(sf.mahler().unwrap_err().to_string(), "line 4: division by zero at byte 1");
        let sf = SystemFile::parse("kind = mahler\nq = 2\nrank = 1\nA[2][1] = 1").unwrap();
        assert!(sf.mahler().is_err());
        let sf = SystemFile::parse("kind = idmod\nq = 2").unwrap();
        assert!(matches!(sf.mahler(), Err(SysFileError::Kind { .. })));
    }

    #[test]
    fn parses_idmod_file() {
        let text = "kind = idmod\nfield = Fp\np = 3\nrank = 2\nA0[1][2] = 1\nA1[1][2] = 2*t\n";
        let m = SystemFile::parse(text).unwrap().idmodule().unwrap();
        assert_eq!(m.level(), 1);
        assert_eq!(m.rank(), 2);
        let bad = "kind = idmod\np = 3\nrank = 1\nA0[1][1] = 1/3\n";
        assert!(SystemFile::parse(bad).unwrap().idmodule().is_err());
    }

    #[test]
    fn parses_series_file() {
        let text = "kind = series\nf[1] = 1/(1 - z)\nf[2] = 1/(1 - z)^2\n";
        assert_eq!(SystemFile::parse(text).unwrap().functions().unwrap().len(), 2);
        let gap = "kind = series\nf[2] = z\n";
        assert!(SystemFile::parse(gap).unwrap().functions().is_err());
    }
}
