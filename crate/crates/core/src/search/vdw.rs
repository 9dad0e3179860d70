//! Monochromatic arithmetic progressions and van der Waerden numbers.

use super::colouring::Colour;
use super::lin::RadoNumber;

/// First `(a, d)` in lexicographic order such that `a, a+d, ..., a+(l-1)d`
/// all lie in `[1, N]` and share a colour, where `table[x - 1]` colours
/// `x`. A single element is a progression with `d = 0`.
pub fn find_progression(table: &[Colour], len: usize) -> Option<(u64, u64)> {
    assert!(len >= 1, "progression length must be positive");
    let n = table.len();
    if n == 0 {
        return None;
    }
    if len == 1 {
        return Some((1, 0));
    }
    for a in 1..=n {
        for d in 1..=(n - a) / (len - 1) {
            let c = table[a - 1];
            if (1..len).all(|i| table[a + i * d - 1] == c) {
                return Some((a as u64, d as u64));
            }
        }
    }
    None
}

/// `W_k(l)`: least `N` such that every `k`-colouring of `[1, N]` contains a
/// monochromatic `l`-term progression. Backtracking with colours
/// introduced in increasing order.
pub fn vdw_number(colours: usize, len: usize, max_n: u64) -> RadoNumber {
    assert!(colours >= 1 && len >= 1);
    fn closes_progression(col: &[usize], x: usize, len: usize) -> bool {
        if len == 1 {
            return true;
        }
        let c = col[x];
        (1..=(x - 1) / (len - 1)).any(|d| (1..len).all(|i| col[x - i * d] == c))
    }
    fn go(x: usize, n: usize, k: usize, len: usize, used: usize, col: &mut Vec<usize>) -> bool {
        if x > n {
            return true;
        }
        for c in 0..k.min(used + 1) {
            col[x] = c;
            if !closes_progression(col, x, len) && go(x + 1, n, k, len, used.max(c + 1), col) {
                return true;
            }
        }
        false
    }
    for n in 1..=max_n as usize {
        let mut col = vec![usize::MAX; n + 1];
        if !go(1, n, colours, len, 0, &mut col) {
            return RadoNumber::Exact(n as u64);
        }
    }
    RadoNumber::ExceedsMax(max_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_examples() {
        assert_eq!(find_progression(&[1, 2, 1, 2, 1, 2, 1, 2], 3), Some((1, 2)));
        assert_eq!(find_progression(&[5], 1), Some((1, 0)));
        assert_eq!(find_progression(&[1, 1, 2, 2, 1, 1, 2, 2], 3), None);
        assert_eq!(find_progression(&[], 2), None);
    }

    #[test]
    fn small_numbers() {
        assert_eq!(vdw_number(2, 3, 20), RadoNumber::Exact(9));
        assert_eq!(vdw_number(1, 3, 20), RadoNumber::Exact(3));
        assert_eq!(vdw_number(3, 2, 20), RadoNumber::Exact(4));
        assert_eq!(vdw_number(2, 3, 8), RadoNumber::ExceedsMax(8));
    }
}
