/// Edit distance (unit-cost insert, delete, substitute) over characters.
pub fn levenshtein(a: &str, b: &str) -> usize {
    if a.is_ascii() && b.is_ascii() {
        distance(a.as_bytes(), b.as_bytes())
    } else {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        distance(&a, &b)
    }
}

fn distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    // Iterate over the longer sequence so the row stays short.
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, x) in long.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, y) in short.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == y {
                diagonal
            } else {
                1 + diagonal.min(above).min(row[j])
            };
            diagonal = above;
        }
    }
    row[short.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Recursive definition with memoisation, kept separate from the
    /// rolling-row implementation.
    fn oracle(a: &[char], b: &[char]) -> usize {
        fn go(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
            if a.is_empty() {
                return b.len();
            }
            if b.is_empty() {
                return a.len();
            }
            if let Some(&d) = memo.get(&(a.len(), b.len())) {
                return d;
            }
            let cost = usize::from(a[0] != b[0]);
            let d = (go(&a[1..], &b[1..], memo) + cost)
                .min(go(&a[1..], b, memo) + 1)
                .min(go(a, &b[1..], memo) + 1);
            memo.insert((a.len(), b.len()), d);
            d
        }
        go(a, b, &mut HashMap::new())
    }

    #[test]
    fn known_distances() {
        assert_eq!(levenshtein("large", "small"), 5);
        assert_eq!(levenshtein("", "small"), 5);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("smal", "small"), 1);
        assert_eq!(levenshtein("héllo", "hello"), 1);
    }

    #[test]
    fn large_vs_small_matches_oracle() {
        let a: Vec<char> = "large".chars().collect();
        let b: Vec<char> = "small".chars().collect();
        assert_eq!(oracle(&a, &b), 5);
    }

    proptest! {
        #[test]
        fn matches_oracle(a in "[a-d]{0,8}", b in "[a-dé]{0,8}") {
            let ac: Vec<char> = a.chars().collect();
            let bc: Vec<char> = b.chars().collect();
            prop_assert_eq!(levenshtein(&a, &b), oracle(&ac, &bc));
        }

        #[test]
        fn identity_and_symmetry(a in ".{0,12}", b in ".{0,12}") {
            prop_assert_eq!(levenshtein(&a, &a), 0);
            prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
        }
    }
}
