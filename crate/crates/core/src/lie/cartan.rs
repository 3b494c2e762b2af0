use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Largest rank accepted; bounds table sizes (E₈ has dimension 248).
pub const MAX_RANK: usize = 8;

/// A finite-type Cartan matrix, `entries[i][j] = ⟨α_j, α_i∨⟩`, so that
/// `[h_i, e_j] = entries[i][j] e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    name: String,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Validates the generalized-Cartan shape, connectedness and
    /// symmetrizability. Finiteness is established by the root closure.
    pub fn new(name: impl Into<String>, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        if n > MAX_RANK {
            return Err(Error::RankTooLarge { rank: n, max: MAX_RANK });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartan(format!("row {i} has {} entries", row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {i} is {}", row[i])));
            }
            for (j, &a) in row.iter().enumerate() {
                if i != j && a > 0 {
                    return Err(Error::InvalidCartan(format!("positive off-diagonal at ({i},{j})")));
                }
                if (a == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("zero pattern not symmetric at ({i},{j})")));
                }
            }
        }
        let m = CartanMatrix { name: name.into(), entries };
        if !m.is_connected() {
            return Err(Error::InvalidCartan("Dynkin diagram is disconnected (not simple)".into()));
        }
        m.symmetrizer()?;
        Ok(m)
    }

    /// Cartan matrix of a named type such as `"A1"`, `"B3"`, `"E8"`, `"G2"`.
    /// Labels follow Bourbaki; for Bₙ the last simple root is short, for Cₙ it
    /// is long.
    pub fn from_type(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(name.to_string());
        let trimmed = name.trim();
        let mut chars = trimmed.chars();
        let letter = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge { rank, max: MAX_RANK });
        }
        let mut a = vec![vec![0i64; rank]; rank];
        let chain = |a: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..rank {
                a[i][i] = 2;
            }
            for i in 0..upto.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        };
        match (letter, rank) {
            ('A', r) if r >= 1 => chain(&mut a, r),
            ('B', r) if r >= 2 => {
                chain(&mut a, r);
                a[r - 1][r - 2] = -2;
            }
            ('C', r) if r >= 2 => {
                chain(&mut a, r);
                a[r - 2][r - 1] = -2;
            }
            ('D', r) if r >= 3 => {
                chain(&mut a, r - 1);
                a[r - 1][r - 1] = 2;
                a[r - 3][r - 1] = -1;
                a[r - 1][r - 3] = -1;
            }
            ('E', r) if (6..=8).contains(&r) => {
                // 1-3-4-5-...-r with 2 attached to 4
                for i in 0..r {
                    a[i][i] = 2;
                }
                let mut link = |i: usize, j: usize| {
                    a[i - 1][j - 1] = -1;
                    a[j - 1][i - 1] = -1;
                };
                link(1, 3);
                link(2, 4);
                for i in 3..r {
                    link(i, i + 1);
                }
            }
            ('F', 4) => {
                chain(&mut a, 4);
                a[2][1] = -2;
            }
            ('G', 2) => {
                chain(&mut a, 2);
                a[0][1] = -3;
            }
            _ => return Err(unknown()),
        }
        CartanMatrix::new(format!("{letter}{rank}"), a)
    }

    /// Parses the text format: first line the rank, then `rank` rows of
    /// whitespace-separated integers.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |msg: String| Error::InvalidCartan(msg);
        let rank: usize = lines
            .next()
            .ok_or_else(|| bad("missing rank line".into()))?
            .parse()
            .map_err(|_| bad("rank is not an integer".into()))?;
        let mut rows = Vec::with_capacity(rank);
        for i in 0..rank {
            let line = lines.next().ok_or_else(|| bad(format!("missing row {i}")))?;
            let row: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(str::parse::<i64>).collect();
            rows.push(row.map_err(|_| bad(format!("row {i} is not integers")))?);
        }
        if lines.next().is_some() {
            return Err(bad("trailing rows after the matrix".into()));
        }
        CartanMatrix::new(name, rows)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map_or_else(|| "custom".to_string(), |s| s.to_string_lossy().into_owned());
        Self::parse(&name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn is_connected(&self) -> bool {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.entries[i][j] != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Squared lengths `(α_i, α_i)`, scaled so the shortest simple root has
    /// length² 2.
    pub fn symmetrizer(&self) -> Result<Vec<Rational>> {
        let n = self.rank();
        let mut d: Vec<Option<Rational>> = vec![None; n];
        d[0] = Some(Rational::ONE);
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().expect("visited");
            for j in 0..n {
                if i == j || self.entries[i][j] == 0 {
                    continue;
                }
                // A_ij (α_i,α_i) = A_ji (α_j,α_j)
                let dj = &di * &Rational::new(self.entries[i][j], self.entries[j][i]);
                match &d[j] {
                    Some(existing) if *existing != dj => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
        let d: Vec<Rational> = d.into_iter().map(|x| x.expect("connected")).collect();
        let min = d.iter().min().expect("nonempty").clone();
        let two = Rational::from_int(2);
        Ok(d.iter().map(|x| &(x / &min) * &two).collect())
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.rank())?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_types() {
        for t in ["A1", "A8", "B2", "C3", "D4", "E6", "E7", "E8", "F4", "G2"] {
            CartanMatrix::from_type(t).unwrap();
        }
        assert!(CartanMatrix::from_type("B1").is_err());
        assert!(CartanMatrix::from_type("F5").is_err());
        assert!(matches!(CartanMatrix::from_type("A9"), Err(Error::RankTooLarge { .. })));
        assert!(CartanMatrix::from_type("Q2").is_err());
    }

    #[test]
    fn g2_lengths() {
        let g2 = CartanMatrix::from_type("G2").unwrap();
        let d = g2.symmetrizer().unwrap();
        assert_eq!(d, vec![Rational::from_int(2), Rational::from_int(6)]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(CartanMatrix::new("x", vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(CartanMatrix::new("x", vec![vec![2, 0], vec![-1, 2]]).is_err());
        assert!(CartanMatrix::new("x", vec![vec![2, 0], vec![0, 2]]).is_err());
        assert!(CartanMatrix::new("x", vec![vec![3]]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let b3 = CartanMatrix::from_type("B3").unwrap();
        let again = CartanMatrix::parse("B3", &b3.to_string()).unwrap();
        assert_eq!(b3, again);
        assert!(CartanMatrix::parse("x", "2\n2 -1\n").is_err());
    }
}
