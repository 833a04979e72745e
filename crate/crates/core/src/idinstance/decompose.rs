use std::cmp::Reverse;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("EMPTY_WORD: cannot decompose an empty word")]
    EmptyWord,
    #[error("NO_DECOMPOSITION: `{word}` is not a sequence of taught facts")]
    NoDecomposition { word: String },
}

impl DecomposeError {
    pub fn code(&self) -> &'static str {
        match self {
            DecomposeError::EmptyWord => "EMPTY_WORD",
            DecomposeError::NoDecomposition { .. } => "NO_DECOMPOSITION",
        }
    }
}

/// Splits `word` into a sequence of taught facts.
///
/// Works on codepoints. At each position the longest matching fact is tried
/// first; equal-length facts are tried in `taught` order. The first complete
/// segmentation found is returned, so the answer is a pure function of the
/// inputs. Empty facts never match.
pub fn decompose_word<S: AsRef<str>>(
    word: &str,
    taught: &[S],
) -> Result<Vec<String>, DecomposeError> {
    if word.is_empty() {
        return Err(DecomposeError::EmptyWord);
    }
    let chars: Vec<char> = word.chars().collect();
    let mut facts: Vec<Vec<char>> = Vec::new();
    for f in taught {
        let f: Vec<char> = f.as_ref().chars().collect();
        if !f.is_empty() && !facts.contains(&f) {
            facts.push(f);
        }
    }
    // stable: ties keep taught order
    facts.sort_by_key(|f| Reverse(f.len()));

    // dead[i]: no segmentation of chars[i..] exists
    let mut dead = vec![false; chars.len()];
    let mut picked: Vec<usize> = Vec::new();
    if search(&chars, 0, &facts, &mut dead, &mut picked) {
        Ok(picked
            .into_iter()
            .map(|i| facts[i].iter().collect())
            .collect())
    } else {
        Err(DecomposeError::NoDecomposition {
            word: word.to_string(),
        })
    }
}

fn search(
    chars: &[char],
    at: usize,
    facts: &[Vec<char>],
    dead: &mut [bool],
    picked: &mut Vec<usize>,
) -> bool {
    if at == chars.len() {
        return true;
    }
    if dead[at] {
        return false;
    }
    for (i, fact) in facts.iter().enumerate() {
        if chars[at..].starts_with(fact) {
            picked.push(i);
            if search(chars, at + fact.len(), facts, dead, picked) {
                return true;
            }
            picked.pop();
        }
    }
    dead[at] = true;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hindi_pair() {
        assert_eq!(decompose_word("नम", &["न", "म"]).unwrap(), vec!["न", "म"]);
        assert_eq!(decompose_word("मन", &["न", "म"]).unwrap(), vec!["म", "न"]);
        assert_eq!(decompose_word("म", &["म"]).unwrap(), vec!["म"]);
    }

    #[test]
    fn backtracks_past_greedy_choice() {
        assert_eq!(
            decompose_word("abc", &["ab", "a", "bc"]).unwrap(),
            vec!["a", "bc"]
        );
    }

    #[test]
    fn longest_first_then_taught_order() {
        assert_eq!(decompose_word("aa", &["a", "aa"]).unwrap(), vec!["aa"]);
        // two length-2 candidates never overlap at one position, so ties show
        // up only through identical facts
        assert_eq!(
            decompose_word("ab", &["a", "b", "a"]).unwrap(),
            vec!["a", "b"]
        );
    }

    #[test]
    fn failures() {
        assert_eq!(decompose_word("", &["a"]), Err(DecomposeError::EmptyWord));
        assert_eq!(
            decompose_word("नर", &["न", "म"]),
            Err(DecomposeError::NoDecomposition {
                word: "नर".into()
            })
        );
        assert!(decompose_word("a", &[""]).is_err());
        assert!(decompose_word::<&str>("a", &[]).is_err());
    }

    #[test]
    fn codepoints_not_bytes() {
        // "ि" is a combining vowel sign; facts that split a codepoint cannot match
        assert_eq!(decompose_word("कि", &["क", "ि"]).unwrap(), vec!["क", "ि"]);
        assert_eq!(decompose_word("कि", &["कि"]).unwrap(), vec!["कि"]);
    }

    #[test]
    fn memo_keeps_long_inputs_fast() {
        let word = "a".repeat(200) + "b";
        let taught = ["a", "aa", "aaa"];
        assert!(decompose_word(&word, &taught).is_err());
    }
}
