use std::collections::BTreeMap;

#[derive(Clone, Debug, Default)]
struct Node {
    children: BTreeMap<char, usize>,
    terminal: bool,
}

/// Character trie stored as an arena of nodes; node 0 is the root.
#[derive(Clone, Debug)]
pub struct Trie {
    nodes: Vec<Node>,
    len: usize,
}

impl Default for Trie {
    fn default() -> Self {
        Self {
            nodes: vec![Node::default()],
            len: 0,
        }
    }
}

impl Trie {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `word`; returns false if it was already present.
    pub fn insert(&mut self, word: &str) -> bool {
        let mut cur = 0;
        for c in word.chars() {
            cur = match self.nodes[cur].children.get(&c) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[cur].children.insert(c, next);
                    next
                }
            };
        }
        let fresh = !self.nodes[cur].terminal;
        self.nodes[cur].terminal = true;
        self.len += fresh as usize;
        fresh
    }

    pub fn contains(&self, word: &str) -> bool {
        let mut cur = 0;
        for c in word.chars() {
            match self.nodes[cur].children.get(&c) {
                Some(&next) => cur = next,
                None => return false,
            }
        }
        self.nodes[cur].terminal
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All stored words in lexicographic (char) order.
    pub fn words(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.len);
        let mut buf = String::new();
        self.collect(0, &mut buf, &mut out);
        out
    }

    fn collect(&self, node: usize, buf: &mut String, out: &mut Vec<String>) {
        if self.nodes[node].terminal {
            out.push(buf.clone());
        }
        for (&c, &child) in &self.nodes[node].children {
            buf.push(c);
            self.collect(child, buf, out);
            buf.pop();
        }
    }

    /// Words of exactly the pattern's length that agree with it at every
    /// position where the pattern is not `wildcard`.
    pub fn wildcard_matches(&self, pattern: &[char], wildcard: char) -> Vec<String> {
        let mut out = Vec::new();
        let mut buf = String::new();
        self.walk_pattern(0, pattern, wildcard, &mut buf, &mut out);
        out
    }

    fn walk_pattern(
        &self,
        node: usize,
        rest: &[char],
        wildcard: char,
        buf: &mut String,
        out: &mut Vec<String>,
    ) {
        let Some((&c, tail)) = rest.split_first() else {
            if self.nodes[node].terminal {
                out.push(buf.clone());
            }
            return;
        };
        let children = &self.nodes[node].children;
        if c == wildcard {
            for (&k, &child) in children {
                buf.push(k);
                self.walk_pattern(child, tail, wildcard, buf, out);
                buf.pop();
            }
        } else if let Some(&child) = children.get(&c) {
            buf.push(c);
            self.walk_pattern(child, tail, wildcard, buf, out);
            buf.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_and_query() {
        let mut t = Trie::new();
        assert!(t.insert("ass"));
        assert!(t.insert("asshole"));
        assert!(!t.insert("ass"));
        assert_eq!(t.len(), 2);
        assert!(t.contains("ass"));
        assert!(!t.contains("as"));
        assert!(!t.contains("assh"));
        assert_eq!(t.words(), vec!["ass", "asshole"]);
    }

    #[test]
    fn wildcard_lookup() {
        let mut t = Trie::new();
        for w in ["fuck", "flak", "folk", "fork", "funk", "fucked"] {
            t.insert(w);
        }
        let pat: Vec<char> = "f**k".chars().collect();
        assert_eq!(
            t.wildcard_matches(&pat, '*'),
            vec!["flak", "folk", "fork", "fuck", "funk"]
        );
        let pat: Vec<char> = "fu*k".chars().collect();
        assert_eq!(t.wildcard_matches(&pat, '*'), vec!["fuck", "funk"]);
    }

    proptest! {
        // Membership must agree with a plain linear scan of the inserted list.
        #[test]
        fn agrees_with_linear_scan(
            words in proptest::collection::vec("[a-d]{1,4}", 0..30),
            probes in proptest::collection::vec("[a-d]{0,5}", 0..30),
        ) {
            let mut t = Trie::new();
            for w in &words {
                t.insert(w);
            }
            for p in probes.iter().chain(words.iter()) {
                prop_assert_eq!(t.contains(p), words.iter().any(|w| w == p));
            }
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(t.words(), sorted);
        }

        #[test]
        fn wildcard_agrees_with_scan(
            words in proptest::collection::vec("[a-c]{1,4}", 0..30),
            pattern in "[a-c*]{1,4}",
        ) {
            let mut t = Trie::new();
            for w in &words {
                t.insert(w);
            }
            let pat: Vec<char> = pattern.chars().collect();
            let mut expected: Vec<String> = words
                .iter()
                .filter(|w| {
                    let wc: Vec<char> = w.chars().collect();
                    wc.len() == pat.len() && wc.iter().zip(&pat).all(|(a, b)| *b == '*' || a == b)
                })
                .cloned()
                .collect();
            expected.sort();
            expected.dedup();
            prop_assert_eq!(t.wildcard_matches(&pat, '*'), expected);
        }
    }
}
