//! FCIDUMP reading and writing.
//!
//! Body lines are `value i j k l` with 1-based orbital indices. `0 0 0 0`
//! is the core energy, `i j 0 0` a one-electron integral and `i 0 0 0` an
//! orbital energy, which is ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MolecularIntegrals;
use crate::error::{GbefError, Result};

/// Two-electron index convention of the body lines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    /// `(ij|kl)`, the usual FCIDUMP convention.
    #[default]
    Chemists,
    /// `<ij|kl> = (ik|jl)`.
    Physicists,
}

impl FromStr for Notation {
    type Err = GbefError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chemists" | "chemist" | "chem" => Ok(Notation::Chemists),
            "physicists" | "physicist" | "phys" => Ok(Notation::Physicists),
            other => Err(GbefError::InvalidInput(format!("unknown integral notation '{other}'"))),
        }
    }
}

/// Agreement required between two entries that describe the same integral.
const DUPLICATE_TOLERANCE: f64 = 1e-12;

fn parse_err(line: usize, message: impl Into<String>) -> GbefError {
    GbefError::Parse { line, message: message.into() }
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
    orbsym: Vec<u32>,
    isym: u32,
}

fn parse_header(lines: &[(usize, &str)]) -> Result<Header> {
    let first = lines.first().map(|l| l.0).unwrap_or(1);
    let mut text = String::new();
    for (_, l) in lines {
        text.push_str(l);
        text.push(',');
    }
    let upper = text.to_ascii_uppercase();
    let body =
        upper.trim_start().strip_prefix("&FCI").ok_or_else(|| parse_err(first, "header must start with &FCI"))?;
    let body = body.replace("&END", "").replace('/', "");

    let mut fields: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((k, v)) = tok.split_once('=') {
            let key = k.trim().to_string();
            let vals = fields.entry(key.clone()).or_default();
            if !v.trim().is_empty() {
                vals.push(v.trim().to_string());
            }
            current = Some(key);
        } else if let Some(k) = &current {
            fields.get_mut(k).expect("current key present").push(tok.to_string());
        } else {
            return Err(parse_err(first, format!("unexpected header token '{tok}'")));
        }
    }

    let scalar = |key: &str| -> Result<Option<i64>> {
        match fields.get(key).and_then(|v| v.first()) {
            None => Ok(None),
            Some(v) => {
                v.parse::<i64>().map(Some).map_err(|_| parse_err(first, format!("{key} is not an integer: '{v}'")))
            }
        }
    };
    let norb = scalar("NORB")?.ok_or_else(|| parse_err(first, "header is missing NORB"))?;
    let nelec = scalar("NELEC")?.ok_or_else(|| parse_err(first, "header is missing NELEC"))?;
    if norb <= 0 {
        return Err(parse_err(first, format!("NORB must be positive, got {norb}")));
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(parse_err(first, format!("NELEC={nelec} does not fit NORB={norb}")));
    }
    let ms2 = scalar("MS2")?.unwrap_or(0);
    let isym = scalar("ISYM")?.unwrap_or(1);
    let orbsym = match fields.get("ORBSYM") {
        Some(v) => v
            .iter()
            .map(|s| s.parse::<u32>().map_err(|_| parse_err(first, format!("bad ORBSYM entry '{s}'"))))
            .collect::<Result<Vec<_>>>()?,
        None => vec![1; norb as usize],
    };
    Ok(Header { norb: norb as usize, nelec: nelec as usize, ms2, orbsym, isym: isym.max(0) as u32 })
}

fn parse_value(s: &str) -> Option<f64> {
    s.replace(['D', 'd'], "e").parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses FCIDUMP text, completing permutational symmetry.
pub fn parse_fcidump(text: &str, notation: Notation) -> Result<MolecularIntegrals> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).collect();
    let end = lines
        .iter()
        .position(|(_, l)| {
            let t = l.trim().to_ascii_uppercase();
            t.contains("&END") || t == "/"
        })
        .ok_or_else(|| parse_err(1, "namelist header is not terminated by &END or /"))?;
    let header = parse_header(&lines[..=end])?;
    let n = header.norb;
    if header.orbsym.len() != n {
        return Err(parse_err(lines[0].0, format!("ORBSYM has {} entries for NORB={n}", header.orbsym.len())));
    }

    let mut m = MolecularIntegrals::zeros(n, header.nelec);
    m.ms2 = header.ms2;
    m.orbsym = header.orbsym;
    m.isym = header.isym;

    let mut seen_core: Option<f64> = None;
    let mut seen1: HashMap<(usize, usize), f64> = HashMap::new();
    let mut seen2: HashMap<[usize; 4], f64> = HashMap::new();

    for &(lineno, line) in &lines[end + 1..] {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(lineno, format!("expected 5 fields, found {}", fields.len())));
        }
        let value = parse_value(fields[0]).ok_or_else(|| parse_err(lineno, format!("bad value '{}'", fields[0])))?;
        let mut idx = [0usize; 4];
        for (k, f) in fields[1..].iter().enumerate() {
            idx[k] = f.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad index '{f}'")))?;
            if idx[k] > n {
                return Err(parse_err(lineno, format!("index {} exceeds NORB={n}", idx[k])));
            }
        }
        let check = |previous: Option<f64>| -> Result<()> {
            match previous {
                Some(p) if (p - value).abs() > DUPLICATE_TOLERANCE => {
                    Err(parse_err(lineno, format!("entry {value} conflicts with earlier symmetric entry {p}")))
                }
                _ => Ok(()),
            }
        };
        match idx {
            [0, 0, 0, 0] => {
                check(seen_core)?;
                seen_core = Some(value);
                m.core_energy = value;
            }
            [i, 0, 0, 0] if i > 0 => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let key = (i.max(j) - 1, i.min(j) - 1);
                check(seen1.get(&key).copied())?;
                seen1.insert(key, value);
                m.set_h1(i - 1, j - 1, value);
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (p, q, r, s) = match notation {
                    Notation::Chemists => (i - 1, j - 1, k - 1, l - 1),
                    Notation::Physicists => (i - 1, k - 1, j - 1, l - 1),
                };
                let key = MolecularIntegrals::canonical_h2_index(p, q, r, s);
                check(seen2.get(&key).copied())?;
                seen2.insert(key, value);
                m.set_h2(p, q, r, s, value);
            }
            _ => {
                return Err(parse_err(lineno, format!("unrecognized index pattern {idx:?}")));
            }
        }
    }
    m.validate()?;
    Ok(m)
}

/// Writes FCIDUMP text in chemists' notation; unique non-zero entries only.
pub fn write_fcidump(m: &MolecularIntegrals) -> String {
    let n = m.n_spatial;
    let mut out = String::new();
    let orbsym: Vec<String> = m.orbsym.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", m.n_electrons, m.ms2);
    let _ = writeln!(out, "  ORBSYM={},", orbsym.join(","));
    let _ = writeln!(out, "  ISYM={},", m.isym);
    let _ = writeln!(out, " &END");
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let v = m.h2(i, j, k, l);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = m.h1(i, j);
            if v != 0.0 {
                let _ = writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(out, "{:e} 0 0 0 0", m.core_energy);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const H2_SNIPPET: &str = " &FCI NORB=   2,NELEC= 2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
0.6744887663568377    1    1    1    1
0.1812104620151087    2    1    2    1
0.6634424587740742    2    2    1    1
0.6973979494693358    2    2    2    2
-1.252463573564898    1    1  0  0
-0.4759487172683672    2    2  0  0
0.7137539936876182  0  0  0  0
";

    #[test]
    fn reads_header_and_core() {
        let m = parse_fcidump(H2_SNIPPET, Notation::Chemists).unwrap();
        assert_eq!(m.n_spatial, 2);
        assert_eq!(m.n_electrons, 2);
        assert_eq!(m.core_energy, 0.7137539936876182);
        assert_eq!(m.h2(0, 1, 0, 1), 0.1812104620151087);
        assert_eq!(m.h2(1, 0, 0, 1), 0.1812104620151087);
        assert_eq!(m.h2(0, 0, 1, 1), 0.6634424587740742);
    }

    #[test]
    fn empty_system() {
        let m = parse_fcidump("&FCI NORB=1,NELEC=0,MS2=0,\n&END\n0.0 0 0 0 0\n", Notation::Chemists).unwrap();
        assert_eq!(m.core_energy, 0.0);
        assert_eq!(m.h1(0, 0), 0.0);
        assert_eq!(m.h2(0, 0, 0, 0), 0.0);
    }

    #[test]
    fn conflicting_duplicate_is_rejected() {
        let text = "&FCI NORB=2,NELEC=2,\n&END\n0.5 2 1 1 1\n0.6 1 2 1 1\n";
        match parse_fcidump(text, Notation::Chemists) {
            Err(GbefError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        let consistent = "&FCI NORB=2,NELEC=2,\n&END\n0.5 2 1 1 1\n0.5 1 2 1 1\n";
        assert!(parse_fcidump(consistent, Notation::Chemists).is_ok());
    }

    #[test]
    fn malformed_input_reports_line() {
        let bad_index = "&FCI NORB=2,NELEC=2,\n&END\n0.5 3 1 1 1\n";
        assert!(matches!(parse_fcidump(bad_index, Notation::Chemists), Err(GbefError::Parse { line: 3, .. })));
        let bad_value = "&FCI NORB=2,NELEC=2,\n&END\n\nabc 1 1 1 1\n";
        assert!(matches!(parse_fcidump(bad_value, Notation::Chemists), Err(GbefError::Parse { line: 4, .. })));
        assert!(parse_fcidump("&FCI NELEC=2,\n&END\n", Notation::Chemists).is_err());
        assert!(parse_fcidump("NORB=2\n", Notation::Chemists).is_err());
    }

    #[test]
    fn fortran_exponents() {
        let m = parse_fcidump("&FCI NORB=1,NELEC=2,\n/\n1.5D-01 1 1 0 0\n", Notation::Chemists).unwrap();
        assert_eq!(m.h1(0, 0), 0.15);
    }

    #[test]
    fn physicists_notation_is_reordered() {
        // <12|12> = (11|22)
        let m = parse_fcidump("&FCI NORB=2,NELEC=2,\n&END\n0.3 1 2 1 2\n", Notation::Physicists).unwrap();
        assert_eq!(m.h2(0, 0, 1, 1), 0.3);
        assert_eq!(m.h2(0, 1, 0, 1), 0.0);
    }

    #[test]
    fn write_then_read_is_identical() {
        let m = parse_fcidump(H2_SNIPPET, Notation::Chemists).unwrap();
        let again = parse_fcidump(&write_fcidump(&m), Notation::Chemists).unwrap();
        assert_eq!(m, again);
    }
}
