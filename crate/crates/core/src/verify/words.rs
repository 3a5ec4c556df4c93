/// First `n` letters of the Thue–Morse word over `{1, 2}`.
pub fn thue_morse_word(n: usize) -> Vec<u8> {
    (0..n as u64).map(|k| 1 + (k.count_ones() % 2) as u8).collect()
}

/// No subword occurs three times in a row.
pub fn is_cube_free(word: &[u8]) -> bool {
    let n = word.len();
    for len in 1..=n / 3 {
        for s in 0..=n - 3 * len {
            let a = &word[s..s + len];
            if a == &word[s + len..s + 2 * len] && a == &word[s + 2 * len..s + 3 * len] {
                return false;
            }
        }
    }
    true
}
