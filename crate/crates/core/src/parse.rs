//! Surface syntax for group specs and exponent sets.
//!
//! ```text
//! spec  := term ("x" term)*
//! term  := "(" spec ")" | atom [":" atom "@" int]
//! atom  := "C" int | "D" int | "PSL(2," int ")" | "Cat(" int "," int ")"
//! ```
//!
//! `:` binds tighter than `x`; whitespace between tokens is ignored. Both
//! operands of `:` must be cyclic and the `@ k` action exponent is required.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::construct::GroupSpec;
use crate::exp_set::ExpSet;

/// First point of failure in a parse: character offset, what the grammar
/// wanted there, and the lexeme actually found.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ParseDiagnostic {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseDiagnostic {
    pub fn new(position: usize, expected: &str, found: &str) -> Self {
        Self { position, expected: expected.to_string(), found: found.to_string() }
    }

    /// Diagnostic at byte offset `pos` of `text`, reporting the lexeme there.
    pub fn at(text: &str, pos: usize, expected: &str) -> Self {
        Self { position: text[..pos].chars().count(), expected: expected.to_string(), found: lexeme_at(text, pos) }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: expected {}, found {}", self.position, self.expected, self.found)
    }
}

impl core::error::Error for ParseDiagnostic {}

fn lexeme_at(text: &str, pos: usize) -> String {
    let rest = &text[pos..];
    let Some(first) = rest.chars().next() else {
        return "end of input".to_string();
    };
    if first.is_ascii_alphanumeric() {
        let kind = first.is_ascii_digit();
        rest.chars().take_while(|c| c.is_ascii_alphanumeric() && (c.is_ascii_digit() == kind || !kind)).collect()
    } else {
        first.to_string()
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.text[self.pos..].chars().next().map_or(0, char::len_utf8);
        }
    }

    fn peek_is(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(token)
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.peek_is(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn fail(&mut self, expected: &str) -> ParseDiagnostic {
        self.skip_ws();
        ParseDiagnostic::at(self.text, self.pos, expected)
    }

    fn expect(&mut self, token: &str, expected: &str) -> Result<(), ParseDiagnostic> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.fail(expected))
        }
    }

    fn int(&mut self) -> Result<u64, ParseDiagnostic> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.fail("integer"));
        }
        let lexeme = &self.text[start..start + digits];
        let value = lexeme.parse::<u64>().map_err(|_| ParseDiagnostic::at(self.text, start, "integer below 2^64"))?;
        self.pos += digits;
        Ok(value)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, ParseDiagnostic> {
    let mut cur = Cursor::new(text);
    let spec = spec(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.fail("'x' or end of input"));
    }
    Ok(spec)
}

fn spec(cur: &mut Cursor<'_>) -> Result<GroupSpec, ParseDiagnostic> {
    let mut terms = vec![term(cur)?];
    while cur.eat("x") {
        terms.push(term(cur)?);
    }
    Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { GroupSpec::Direct(terms) })
}

fn term(cur: &mut Cursor<'_>) -> Result<GroupSpec, ParseDiagnostic> {
    if cur.eat("(") {
        let inner = spec(cur)?;
        cur.expect(")", "'x' or ')'")?;
        return Ok(inner);
    }
    cur.skip_ws();
    let left_pos = cur.pos;
    let left = atom(cur)?;
    if !cur.eat(":") {
        return Ok(left);
    }
    let GroupSpec::Cyclic(n) = left else {
        return Err(ParseDiagnostic::at(cur.text, left_pos, "cyclic kernel C<n>"));
    };
    cur.skip_ws();
    let right_pos = cur.pos;
    let GroupSpec::Cyclic(m) = atom(cur)? else {
        return Err(ParseDiagnostic::at(cur.text, right_pos, "cyclic complement C<m>"));
    };
    cur.expect("@", "'@'")?;
    let k = cur.int()?;
    Ok(GroupSpec::SemidirectCyclic { n, m, k })
}

fn atom(cur: &mut Cursor<'_>) -> Result<GroupSpec, ParseDiagnostic> {
    if cur.eat("PSL") {
        cur.expect("(", "'('")?;
        cur.skip_ws();
        let two_pos = cur.pos;
        if cur.int()? != 2 {
            return Err(ParseDiagnostic::at(cur.text, two_pos, "2"));
        }
        cur.expect(",", "','")?;
        let q = cur.int()?;
        cur.expect(")", "')'")?;
        return Ok(GroupSpec::Psl2(q));
    }
    if cur.eat("Cat") {
        cur.expect("(", "'('")?;
        let order = cur.int()?;
        cur.expect(",", "','")?;
        let index = cur.int()?;
        cur.expect(")", "')'")?;
        return Ok(GroupSpec::CatalogRef { order, index });
    }
    if cur.eat("C") {
        return Ok(GroupSpec::Cyclic(cur.int()?));
    }
    if cur.eat("D") {
        return Ok(GroupSpec::Dihedral(cur.int()?));
    }
    Err(cur.fail("group (C<n>, D<n>, PSL(2,<q>), Cat(<order>,<index>) or '(')"))
}

/// An exponent set plus non-fatal diagnostics (duplicate values).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedExpSet {
    pub set: ExpSet,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses `{a,b,...}`; duplicates collapse with a warning.
pub fn parse_exp_set(text: &str) -> Result<ParsedExpSet, ParseDiagnostic> {
    let mut cur = Cursor::new(text);
    cur.expect("{", "'{'")?;
    let mut values = Vec::new();
    let mut warnings = Vec::new();
    loop {
        cur.skip_ws();
        let pos = cur.pos;
        let v = cur.int()?;
        if v == 0 {
            return Err(ParseDiagnostic::at(text, pos, "positive integer"));
        }
        if values.contains(&v) {
            warnings.push(ParseDiagnostic::at(text, pos, "distinct value (duplicate collapsed)"));
        }
        values.push(v);
        if cur.eat("}") {
            break;
        }
        cur.expect(",", "',' or '}'")?;
    }
    if !cur.at_end() {
        return Err(cur.fail("end of input"));
    }
    let set = ExpSet::new(values).expect("nonempty, positive");
    Ok(ParsedExpSet { set, warnings })
}

pub fn render_exp_set(set: &ExpSet) -> String {
    set.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::GroupSpec::*;
    use alloc::format;
    use proptest::prelude::*;

    #[test]
    fn group_specs() {
        assert_eq!(parse_group_spec("C30").unwrap(), Cyclic(30));
        assert_eq!(parse_group_spec("PSL(2,7)").unwrap(), Psl2(7));
        assert_eq!(
            parse_group_spec("C14 x (C13 : C3 @ 3)").unwrap(),
            Direct(vec![Cyclic(14), SemidirectCyclic { n: 13, m: 3, k: 3 }])
        );
        assert_eq!(
            parse_group_spec("C14xC13:C3@3").unwrap(),
            Direct(vec![Cyclic(14), SemidirectCyclic { n: 13, m: 3, k: 3 }])
        );
        assert_eq!(parse_group_spec(" D8 ").unwrap(), Dihedral(8));
        assert_eq!(parse_group_spec("Cat(60, 4)").unwrap(), CatalogRef { order: 60, index: 4 });
        assert_eq!(
            parse_group_spec("C2 x (C3 x C5)").unwrap(),
            Direct(vec![Cyclic(2), Direct(vec![Cyclic(3), Cyclic(5)])])
        );
        assert_eq!(parse_group_spec("((C7))").unwrap(), Cyclic(7));
    }

    #[test]
    fn group_spec_diagnostics() {
        let err = |s: &str| parse_group_spec(s).unwrap_err();
        assert_eq!(err("C"), ParseDiagnostic::new(1, "integer", "end of input"));
        assert_eq!(err("C13 : C3"), ParseDiagnostic::new(8, "'@'", "end of input"));
        assert_eq!(err("PSL(3,5)"), ParseDiagnostic::new(4, "2", "3"));
        assert_eq!(err("D8 : C2 @ 1"), ParseDiagnostic::new(0, "cyclic kernel C<n>", "D8"));
        assert_eq!(err("C7 : PSL(2,5) @ 1"), ParseDiagnostic::new(5, "cyclic complement C<m>", "PSL"));
        assert_eq!(err("C2 C3"), ParseDiagnostic::new(3, "'x' or end of input", "C3"));
        assert_eq!(err("(C2 x C3"), ParseDiagnostic::new(8, "'x' or ')'", "end of input"));
        assert_eq!(
            err("Z30"),
            ParseDiagnostic::new(0, "group (C<n>, D<n>, PSL(2,<q>), Cat(<order>,<index>) or '(')", "Z30")
        );
        assert_eq!(err("C99999999999999999999"), ParseDiagnostic::new(1, "integer below 2^64", "99999999999999999999"));
    }

    #[test]
    fn exp_sets() {
        let parsed = parse_exp_set("{15,20,24}").unwrap();
        assert_eq!(parsed.set, ExpSet::new([15, 20, 24]).unwrap());
        assert!(parsed.warnings.is_empty());
        assert_eq!(render_exp_set(&parse_exp_set("{24,15,20}").unwrap().set), "{15,20,24}");
        assert_eq!(parse_exp_set("{}").unwrap_err(), ParseDiagnostic::new(1, "integer", "}"));
        let dup = parse_exp_set("{ 15, 20, 15 }").unwrap();
        assert_eq!(dup.set.to_string(), "{15,20}");
        assert_eq!(dup.warnings, vec![ParseDiagnostic::new(10, "distinct value (duplicate collapsed)", "15")]);
        assert_eq!(parse_exp_set("{1,x}").unwrap_err(), ParseDiagnostic::new(3, "integer", "x"));
        assert_eq!(parse_exp_set("{0}").unwrap_err(), ParseDiagnostic::new(1, "positive integer", "0"));
        assert_eq!(parse_exp_set("15,20").unwrap_err(), ParseDiagnostic::new(0, "'{'", "15"));
        assert_eq!(parse_exp_set("{1}x").unwrap_err(), ParseDiagnostic::new(3, "end of input", "x"));
    }

    fn arb_spec() -> impl Strategy<Value = GroupSpec> {
        let leaf = prop_oneof![
            (1u64..500).prop_map(Cyclic),
            (1u64..500).prop_map(Dihedral),
            (1u64..50).prop_map(Psl2),
            (1u64..100, 1u64..10, 0u64..100).prop_map(|(n, m, k)| SemidirectCyclic { n, m, k }),
            (1u64..100, 0u64..20).prop_map(|(order, index)| CatalogRef { order, index }),
        ];
        leaf.prop_recursive(3, 16, 4, |inner| proptest::collection::vec(inner, 2..4).prop_map(Direct))
    }

    proptest! {
        #[test]
        fn spec_render_parse_identity(spec in arb_spec()) {
            let text = format!("{spec}");
            prop_assert_eq!(parse_group_spec(&text).unwrap(), spec);
        }

        #[test]
        fn exp_set_render_parse_identity(values in proptest::collection::btree_set(1u64..1_000_000, 1..8)) {
            let set = ExpSet::new(values).unwrap();
            prop_assert_eq!(parse_exp_set(&render_exp_set(&set)).unwrap().set, set);
        }
    }
}
