//! A deterministic pseudo-word corpus for the textual workload.

/// Size of the word list the textual generator samples from.
pub const CORPUS_WORDS: usize = 83_740;

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// `n` distinct lowercase pseudo-words built from consonant-vowel
/// syllables: all two-syllable words first, then three, and so on.
pub fn pseudo_words(n: usize) -> Vec<String> {
    let syllables: Vec<[u8; 2]> = CONSONANTS
        .iter()
        .flat_map(|&c| VOWELS.iter().map(move |&v| [c, v]))
        .collect();
    let base = syllables.len();
    let mut out = Vec::with_capacity(n);
    let mut len = 2u32;
    while out.len() < n {
        let total = base.pow(len);
        for mut k in 0..total {
            if out.len() == n {
                break;
            }
            let mut w = String::with_capacity(2 * len as usize);
            for _ in 0..len {
                let s = syllables[k % base];
                w.push(s[0] as char);
                w.push(s[1] as char);
                k /= base;
            }
            out.push(w);
        }
        len += 1;
    }
    out
}

/// Words from a plain-text file, one or more per line.
pub fn words_from_text(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}
