//! Regular expressions over items.
//!
//! Surface syntax: item names separated by whitespace or operators, `.` for
//! any item, `|`, postfix `*`, `+`, `?`, and parentheses. Postfix operators
//! bind tightest, then concatenation, then alternation. Names are maximal
//! runs of characters that are neither whitespace nor an operator, so both
//! `A*B(B|C)` and `A * B ( B | C )` parse the same way.

mod dfa;
mod nfa;

pub use dfa::Dfa;
pub use nfa::Nfa;

use crate::error::{Error, Result};
use crate::seqdb::{ItemDictionary, ItemId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexAst {
    Item(ItemId),
    /// `.`: any item of the dictionary.
    Any,
    Concat(Vec<RegexAst>),
    Alt(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
}

impl RegexAst {
    pub fn parse(expr: &str, dict: &ItemDictionary) -> Result<Self> {
        let tokens = tokenize(expr);
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            dict,
            end: expr.len(),
        };
        let ast = p.alternation()?;
        if let Some(tok) = p.peek() {
            return Err(p.error_at(tok.offset, format!("unexpected {:?}", tok.text)));
        }
        Ok(ast)
    }

    /// Items named explicitly in the expression.
    pub fn literals(&self, out: &mut Vec<ItemId>) {
        match self {
            RegexAst::Item(it) => out.push(*it),
            RegexAst::Any => {}
            RegexAst::Concat(v) | RegexAst::Alt(v) => v.iter().for_each(|a| a.literals(out)),
            RegexAst::Star(a) | RegexAst::Plus(a) | RegexAst::Optional(a) => a.literals(out),
        }
    }
}

/// Parses `expr` and builds the `□`-augmented automaton for `dict`.
pub fn compile_regex(expr: &str, dict: &ItemDictionary) -> Result<Dfa> {
    let ast = RegexAst::parse(expr, dict)?;
    let nfa = Nfa::from_ast(&ast);
    Ok(Dfa::from_nfa(&nfa, dict.len()).minimize().augment())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Name,
    Op(char),
}

#[derive(Debug, Clone)]
struct Token<'a> {
    kind: Kind,
    text: &'a str,
    offset: usize,
}

const OPERATORS: &[char] = &['(', ')', '|', '*', '+', '?', '.'];

fn tokenize(expr: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut name_start = None;
    for (i, c) in expr.char_indices() {
        let breaks = c.is_whitespace() || OPERATORS.contains(&c);
        if breaks {
            if let Some(s) = name_start.take() {
                out.push(Token {
                    kind: Kind::Name,
                    text: &expr[s..i],
                    offset: s,
                });
            }
            if !c.is_whitespace() {
                out.push(Token {
                    kind: Kind::Op(c),
                    text: &expr[i..i + c.len_utf8()],
                    offset: i,
                });
            }
        } else if name_start.is_none() {
            name_start = Some(i);
        }
    }
    if let Some(s) = name_start {
        out.push(Token {
            kind: Kind::Name,
            text: &expr[s..],
            offset: s,
        });
    }
    out
}

struct Parser<'t, 'a> {
    tokens: &'t [Token<'a>],
    pos: usize,
    dict: &'t ItemDictionary,
    end: usize,
}

impl<'t, 'a> Parser<'t, 'a> {
    fn peek(&self) -> Option<&'t Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn error_at(&self, pos: usize, msg: String) -> Error {
        Error::RegexSyntax { pos, msg }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn alternation(&mut self) -> Result<RegexAst> {
        let mut branches = vec![self.concatenation()?];
        while matches!(self.peek(), Some(t) if t.kind == Kind::Op('|')) {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            RegexAst::Alt(branches)
        })
    }

    fn concatenation(&mut self) -> Result<RegexAst> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t.kind, Kind::Op('|') | Kind::Op(')')) {
                break;
            }
            parts.push(self.repetition()?);
        }
        match parts.len() {
            0 => Err(self.error_at(self.here(), "expected an item, '.' or '('".into())),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(RegexAst::Concat(parts)),
        }
    }

    fn repetition(&mut self) -> Result<RegexAst> {
        let mut atom = self.atom()?;
        while let Some(t) = self.peek() {
            atom = match t.kind {
                Kind::Op('*') => RegexAst::Star(Box::new(atom)),
                Kind::Op('+') => RegexAst::Plus(Box::new(atom)),
                Kind::Op('?') => RegexAst::Optional(Box::new(atom)),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let Some(t) = self.peek() else {
            return Err(self.error_at(self.end, "unexpected end of expression".into()));
        };
        self.pos += 1;
        match t.kind {
            Kind::Name => self
                .dict
                .get(t.text)
                .map(RegexAst::Item)
                .ok_or_else(|| Error::UnknownItem(t.text.to_owned())),
            Kind::Op('.') => Ok(RegexAst::Any),
            Kind::Op('(') => {
                let inner = self.alternation()?;
                match self.peek() {
                    Some(c) if c.kind == Kind::Op(')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error_at(self.here(), "expected ')'".into())),
                }
            }
            Kind::Op(c) => Err(self.error_at(t.offset, format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Value;
    use crate::seqdb::SequenceDatabase;
    use proptest::prelude::*;

    fn dict(names: &[&str]) -> ItemDictionary {
        let mut d = ItemDictionary::new();
        for n in names {
            d.intern(n);
        }
        d
    }

    fn word(d: &ItemDictionary, text: &str) -> Vec<ItemId> {
        text.split_whitespace().map(|n| d.get(n).unwrap()).collect()
    }

    #[test]
    fn tokenizer_splits_operators() {
        let toks: Vec<_> = tokenize("A*B(B|C) GENE").iter().map(|t| t.text).collect();
        assert_eq!(toks, ["A", "*", "B", "(", "B", "|", "C", ")", "GENE"]);
    }

    #[test]
    fn precedence() {
        let d = dict(&["A", "B", "C"]);
        let [a, b, c] = [0, 1, 2].map(|i| RegexAst::Item(ItemId(i)));
        assert_eq!(
            RegexAst::parse("A B | C *", &d).unwrap(),
            RegexAst::Alt(vec![
                RegexAst::Concat(vec![a.clone(), b.clone()]),
                RegexAst::Star(Box::new(c.clone()))
            ])
        );
        assert_eq!(
            RegexAst::parse("(A|B)+?", &d).unwrap(),
            RegexAst::Optional(Box::new(RegexAst::Plus(Box::new(RegexAst::Alt(vec![
                a, b
            ])))))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let d = dict(&["A", "B"]);
        for (expr, pos) in [
            ("(A", 2),
            ("A |", 3),
            ("*A", 0),
            ("A )", 2),
            ("", 0),
            ("()", 1),
        ] {
            match RegexAst::parse(expr, &d) {
                Err(Error::RegexSyntax { pos: p, .. }) => assert_eq!(p, pos, "{expr}"),
                other => panic!("{expr}: {other:?}"),
            }
        }
        assert!(matches!(RegexAst::parse("A Z", &d), Err(Error::UnknownItem(n)) if n == "Z"));
    }

    #[test]
    fn protein_wildcard_example() {
        let names = [
            "A", "R", "N", "D", "C", "Q", "E", "G", "H", "I", "L", "K", "M", "F", "P", "S", "T",
            "W", "Y", "V",
        ];
        let d = dict(&names);
        let dfa = compile_regex("( S | T ) . ( R | K )", &d).unwrap();
        assert!(dfa.accepts_items(&word(&d, "S A R")));
        assert!(dfa.accepts_items(&word(&d, "T T K")));
        assert!(!dfa.accepts_items(&word(&d, "S R")));
        assert!(!dfa.accepts_items(&word(&d, "S A R K")));
    }

    #[test]
    fn single_literal() {
        let d = dict(&["A", "B"]);
        let dfa = compile_regex("A", &d).unwrap();
        assert!(dfa.accepts_items(&word(&d, "A")));
        assert!(!dfa.accepts_items(&word(&d, "A A")));
        assert!(!dfa.accepts_items(&[]));
        assert!(!dfa.accepts_items(&word(&d, "B")));
    }

    #[test]
    fn star_then_alternation() {
        let d = dict(&["A", "B", "C"]);
        let dfa = compile_regex("A * B ( B | C )", &d).unwrap();
        assert!(dfa.accepts_items(&word(&d, "B C")));
        assert!(dfa.accepts_items(&word(&d, "A A B B")));
        assert!(!dfa.accepts_items(&word(&d, "B")));
        // Juxtaposed form is the same expression.
        let tight = compile_regex("A*B(B|C)", &d).unwrap();
        assert_eq!(tight.dump(&d), dfa.dump(&d));
    }

    #[test]
    fn padding_semantics() {
        let d = dict(&["A", "B"]);
        let dfa = compile_regex("A B?", &d).unwrap();
        let [a, b] = [0, 1].map(|i| Value::Item(ItemId(i)));
        let e = Value::Empty;
        assert!(dfa.accepts(&[a, e, e]));
        assert!(dfa.accepts(&[a, b, e]));
        assert!(!dfa.accepts(&[a, e, b]));
        assert!(!dfa.accepts(&[b, e, e]));
        assert!(!dfa.accepts(&[e, e, e]));
    }

    #[test]
    fn dump_is_stable() {
        let db = SequenceDatabase::from_names([["A", "B"]]).unwrap();
        let dfa = compile_regex("A B*", db.dictionary()).unwrap();
        let expected = "\
states=4 start=0 accepting=[1,3] dead=2 end=3
0 A 1
0 B 2
0 □ 2
1 A 2
1 B 1
1 □ 3
2 A 2
2 B 2
2 □ 2
3 A 2
3 B 2
3 □ 3
";
        assert_eq!(dfa.dump(db.dictionary()), expected);
    }

    fn arb_ast(depth: u32) -> BoxedStrategy<RegexAst> {
        let leaf = prop_oneof![
            (0u32..3).prop_map(|i| RegexAst::Item(ItemId(i))),
            Just(RegexAst::Any)
        ];
        if depth == 0 {
            return leaf.boxed();
        }
        let inner = arb_ast(depth - 1);
        prop_oneof![
            2 => leaf,
            1 => prop::collection::vec(inner.clone(), 2..4).prop_map(RegexAst::Concat),
            1 => prop::collection::vec(inner.clone(), 2..4).prop_map(RegexAst::Alt),
            1 => inner.clone().prop_map(|a| RegexAst::Star(Box::new(a))),
            1 => inner.clone().prop_map(|a| RegexAst::Plus(Box::new(a))),
            1 => inner.prop_map(|a| RegexAst::Optional(Box::new(a))),
        ]
        .boxed()
    }

    proptest! {
        #[test]
        fn augmented_dfa_matches_nfa(
            ast in arb_ast(3),
            w in prop::collection::vec(0u32..3, 0..6),
            pad in 0usize..3,
        ) {
            let nfa = Nfa::from_ast(&ast);
            let raw = Dfa::from_nfa(&nfa, 3);
            let dfa = raw.minimize().augment();
            let items: Vec<ItemId> = w.iter().map(|&i| ItemId(i)).collect();
            let expected = nfa.accepts(&items, 3);
            prop_assert_eq!(raw.accepts_items(&items), expected);
            prop_assert_eq!(dfa.accepts_items(&items), expected);
            let mut padded: Vec<Value> = items.iter().map(|&i| Value::Item(i)).collect();
            padded.extend(std::iter::repeat_n(Value::Empty, pad));
            prop_assert_eq!(dfa.accepts(&padded), expected);
            // An item after □ is always rejected.
            if pad > 0 {
                padded.push(Value::Item(ItemId(0)));
                prop_assert!(!dfa.accepts(&padded));
            }
        }

        #[test]
        fn minimization_preserves_language(ast in arb_ast(3), w in prop::collection::vec(0u32..3, 0..6)) {
            let raw = Dfa::from_nfa(&Nfa::from_ast(&ast), 3);
            let min = raw.minimize();
            prop_assert!(min.num_states() <= raw.num_states());
            let items: Vec<ItemId> = w.iter().map(|&i| ItemId(i)).collect();
            prop_assert_eq!(min.accepts_items(&items), raw.accepts_items(&items));
        }
    }
}
