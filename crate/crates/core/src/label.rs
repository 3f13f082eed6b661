//! Natural ordering of node and cell labels.
//!
//! Fixture labels are mostly integers ("7", "17") or integers with a prefix
//! ("γ1", "γ10"). Comparing digit runs numerically keeps reports in the order
//! a reader expects: 7 before 17, γ2 before γ10.

use std::cmp::Ordering;

/// Compares two labels, treating runs of ASCII digits as numbers.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    let mut ai = a.char_indices().peekable();
    let mut bi = b.char_indices().peekable();
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((sa, ca)), Some((sb, cb))) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let ea = digit_run_end(a, sa);
                    let eb = digit_run_end(b, sb);
                    let na = a[sa..ea].trim_start_matches('0');
                    let nb = b[sb..eb].trim_start_matches('0');
                    let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    while ai.peek().is_some_and(|&(i, _)| i < ea) {
                        ai.next();
                    }
                    while bi.peek().is_some_and(|&(i, _)| i < eb) {
                        bi.next();
                    }
                } else {
                    let ord = ca.cmp(&cb);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    ai.next();
                    bi.next();
                }
            }
        }
    }
}

fn digit_run_end(s: &str, start: usize) -> usize {
    s[start..]
        .char_indices()
        .find(|(_, c)| !c.is_ascii_digit())
        .map_or(s.len(), |(i, _)| start + i)
}

/// Lexicographic comparison of label sequences under [`label_cmp`].
pub fn seq_cmp<S: AsRef<str>>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = label_cmp(x.as_ref(), y.as_ref());
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

/// Wrapper giving a `String` the natural label ordering, for use as a map key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Natural(pub String);

impl Ord for Natural {
    fn cmp(&self, other: &Self) -> Ordering {
        label_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Natural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_runs_compare_by_value() {
        assert_eq!(label_cmp("7", "17"), Ordering::Less);
        assert_eq!(label_cmp("γ2", "γ10"), Ordering::Less);
        assert_eq!(label_cmp("⟨0,1⟩", "⟨0,10⟩"), Ordering::Less);
        assert_eq!(label_cmp("a", "b"), Ordering::Less);
        assert_eq!(label_cmp("12", "12"), Ordering::Equal);
    }

    #[test]
    fn leading_zeros_fall_back_to_raw_order() {
        assert_ne!(label_cmp("01", "1"), Ordering::Equal);
    }

    #[test]
    fn sequences() {
        assert_eq!(seq_cmp(&["1", "2", "3"], &["1", "2", "4"]), Ordering::Less);
        assert_eq!(seq_cmp(&["1", "2"], &["1", "2", "4"]), Ordering::Less);
    }
}
