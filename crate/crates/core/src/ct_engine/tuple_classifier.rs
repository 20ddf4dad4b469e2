use serde::Serialize;

use crate::error::{Error, Result};

/// Which zero mechanism applies to a tuple `(k_1, ..., k_s)`; indices are
/// 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma42Verdict {
    /// `0 <= k_i <= b`, lowest such `i`.
    EarlySmall(usize),
    /// `1 - k <= k_j - k_i <= k` for `i < j`, lexicographically first pair.
    ClosePair(usize, usize),
    /// `k_i = (s-i)k + b + 1` for every `i`.
    Exceptional,
}

/// Classify a tuple with entries in `0..=(s-1)k + b + 1`.
pub fn lemma_important(kparam: i64, b: i64, s: usize, tuple: &[i64]) -> Result<Lemma42Verdict> {
    if tuple.len() != s {
        return Err(Error::ParameterOutOfRange(format!(
            "tuple has {} entries, expected s = {s}",
            tuple.len()
        )));
    }
    if kparam < 0 || b < 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "k, b must be nonnegative (k={kparam}, b={b})"
        )));
    }
    let top = (s as i64 - 1).max(0) * kparam + b + 1;
    if let Some(x) = tuple.iter().find(|&&x| x < 0 || x > top) {
        return Err(Error::ParameterOutOfRange(format!(
            "tuple entry {x} outside 0..={top}"
        )));
    }
    if let Some(i) = tuple.iter().position(|&x| x <= b) {
        return Ok(Lemma42Verdict::EarlySmall(i + 1));
    }
    for i in 0..s {
        for j in i + 1..s {
            let d = tuple[j] - tuple[i];
            if 1 - kparam <= d && d <= kparam {
                return Ok(Lemma42Verdict::ClosePair(i + 1, j + 1));
            }
        }
    }
    for (i, &x) in tuple.iter().enumerate() {
        let want = (s - i - 1) as i64 * kparam + b + 1;
        if x != want {
            return Err(Error::LemmaViolation(format!(
                "tuple {tuple:?} (k={kparam}, b={b}) escapes both conditions"
            )));
        }
    }
    Ok(Lemma42Verdict::Exceptional)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            lemma_important(2, 0, 2, &[3, 1]).unwrap(),
            Lemma42Verdict::Exceptional
        );
        assert_eq!(
            lemma_important(2, 0, 2, &[1, 3]).unwrap(),
            Lemma42Verdict::ClosePair(1, 2)
        );
        assert_eq!(
            lemma_important(2, 0, 2, &[0, 3]).unwrap(),
            Lemma42Verdict::EarlySmall(1)
        );
        assert!(lemma_important(2, 0, 2, &[4, 1]).is_err());
        assert!(lemma_important(2, 0, 2, &[1]).is_err());
        assert_eq!(
            lemma_important(3, 1, 0, &[]).unwrap(),
            Lemma42Verdict::Exceptional
        );
    }

    #[test]
    fn exceptional_tuple_shape() {
        assert_eq!(
            lemma_important(3, 1, 3, &[8, 5, 2]).unwrap(),
            Lemma42Verdict::Exceptional
        );
        // ascending order: k_2 - k_1 = 3 = k
        assert_eq!(
            lemma_important(3, 1, 3, &[2, 5, 8]).unwrap(),
            Lemma42Verdict::ClosePair(1, 2)
        );
    }
}
