//! Text syntax for formulas.
//!
//! ```text
//! F ::= T | E(e<j>,v<i>) | e<j>=e<j'> | v<i>=v<i'> | !F | (F & F)
//!     | E>=<n>(<vars>).(G & F)
//! ```
//!
//! `<vars>` is a comma-separated list of variables of one sort in strictly
//! ascending index order; `G` is `T` or a conjunction of `E(e_j, v_i)` atoms
//! with pairwise distinct red indices. Whitespace is ignored. Rendering emits
//! the canonical form with a right-associated guard in ascending red index.

use super::ast::{guard_formula, Formula};
use crate::error::{Error, Result};
use crate::guard::GuardFunction;

/// Parses a formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0, len: text.len() };
    let f = p.formula()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

/// Renders a formula in the canonical grammar.
pub fn render_formula(phi: &Formula) -> String {
    let mut s = String::new();
    render_into(phi, &mut s);
    s
}

fn render_into(phi: &Formula, s: &mut String) {
    use std::fmt::Write;
    match phi {
        Formula::Top => s.push('T'),
        Formula::AtomE { blue, red } => {
            let _ = write!(s, "E(e{blue},v{red})");
        }
        Formula::EqBlue(a, b) => {
            let _ = write!(s, "e{a}=e{b}");
        }
        Formula::EqRed(a, b) => {
            let _ = write!(s, "v{a}=v{b}");
        }
        Formula::Not(f) => {
            s.push('!');
            render_into(f, s);
        }
        Formula::And(a, b) => {
            s.push('(');
            render_into(a, s);
            s.push_str(" & ");
            render_into(b, s);
            s.push(')');
        }
        Formula::ExistsRed { n, vars, guard, body } | Formula::ExistsBlue { n, vars, guard, body } => {
            let sort = if matches!(phi, Formula::ExistsRed { .. }) { 'v' } else { 'e' };
            let list: Vec<String> = vars.iter().map(|x| format!("{sort}{x}")).collect();
            let _ = write!(s, "E>={n}({}).(", list.join(","));
            render_into(&guard_formula(guard), s);
            s.push_str(" & ");
            render_into(body, s);
            s.push(')');
        }
    }
}

/// Converts a guard-shaped formula (`⊤` or a conjunction of `E` atoms with
/// distinct red indices) into a guard function.
pub fn formula_to_guard(f: &Formula) -> std::result::Result<GuardFunction, String> {
    fn collect(f: &Formula, out: &mut Vec<(usize, usize)>) -> std::result::Result<(), String> {
        match f {
            Formula::AtomE { blue, red } => {
                out.push((*red, *blue));
                Ok(())
            }
            Formula::And(a, b) => {
                collect(a, out)?;
                collect(b, out)
            }
            _ => Err("guard must be T or a conjunction of E atoms".into()),
        }
    }
    if *f == Formula::Top {
        return Ok(GuardFunction::empty());
    }
    let mut pairs = Vec::new();
    collect(f, &mut pairs)?;
    let mut g = GuardFunction::empty();
    for (i, j) in pairs {
        if let Some(old) = g.get(i) {
            return Err(format!("guard assigns red variable v{i} twice (e{old} and e{j})"));
        }
        g.insert(i, j);
    }
    Ok(g)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.len)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.offset(), message: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|c| c.1)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().map_err(|_| Error::Syntax { pos: self.chars[start].0, message: "number too large".into() })
    }

    fn index(&mut self, sort: char) -> Result<usize> {
        self.expect(sort)?;
        let at = self.offset();
        let n = self.number()?;
        if n == 0 {
            return Err(Error::Syntax { pos: at, message: "variable indices start at 1".into() });
        }
        Ok(n as usize)
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some('T') => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some('!') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some('(') => {
                self.pos += 1;
                let a = self.formula()?;
                self.expect('&')?;
                let b = self.formula()?;
                self.expect(')')?;
                Ok(Formula::and(a, b))
            }
            Some('E') if self.peek_at(1) == Some('(') => {
                self.pos += 2;
                let blue = self.index('e')?;
                self.expect(',')?;
                let red = self.index('v')?;
                self.expect(')')?;
                Ok(Formula::atom(blue, red))
            }
            Some('E') if self.peek_at(1) == Some('>') => {
                self.pos += 1;
                self.expect('>')?;
                self.expect('=')?;
                let at = self.offset();
                let n = self.number()?;
                if n == 0 {
                    return Err(Error::Syntax { pos: at, message: "counting threshold must be at least 1".into() });
                }
                self.expect('(')?;
                let sort = match self.peek() {
                    Some(c @ ('v' | 'e')) => c,
                    _ => return Err(self.error("expected a variable")),
                };
                let mut vars = vec![self.index(sort)?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    let at = self.offset();
                    let x = self.index(sort)?;
                    if x <= *vars.last().unwrap() {
                        return Err(Error::Syntax {
                            pos: at,
                            message: "quantified variables must be strictly ascending and of one sort".into(),
                        });
                    }
                    vars.push(x);
                }
                self.expect(')')?;
                self.expect('.')?;
                self.expect('(')?;
                let at = self.offset();
                let g = self.formula()?;
                let guard = formula_to_guard(&g).map_err(|m| Error::Syntax { pos: at, message: m })?;
                self.expect('&')?;
                let body = self.formula()?;
                self.expect(')')?;
                Ok(if sort == 'v' {
                    Formula::exists_red(n, vars, guard, body)
                } else {
                    Formula::exists_blue(n, vars, guard, body)
                })
            }
            Some(c @ ('e' | 'v')) => {
                let a = self.index(c)?;
                self.expect('=')?;
                let b = self.index(c)?;
                Ok(if c == 'e' { Formula::EqBlue(a, b) } else { Formula::EqRed(a, b) })
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}
