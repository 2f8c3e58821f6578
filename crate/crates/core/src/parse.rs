//! Recursive-descent parser for measure and rule expressions.
//!
//! ```text
//! measure := dwt(h) | pwt(h) | dct(h) | pct(h)
//!          | sum(measure,measure) | min(measure,measure)
//!          | star(measure) | rsqrt(rule) | mixture:<path>
//! rule    := kp(h) | ka(h) | ks(h) | kd(h)
//!          | and(rule,rule) | or(rule,rule) | msqrt(measure)
//! h       := len | scaled:<p>/<q> | table:<path>
//! ```
//!
//! Paths are resolved through a [`Resolver`] so the parser itself stays
//! free of file I/O; errors carry the byte offset of the offending token.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::premeasure::{HSpec, PreMeasureSpec, TreeFamily};
use crate::rules::RuleSpec;
use crate::strings::BinaryString;

/// Supplies the file-backed leaves of an expression.
pub trait Resolver {
    fn h_table(&self, path: &str) -> Result<BTreeMap<BinaryString, u32>, Error>;
    fn tree_family(&self, path: &str) -> Result<TreeFamily, Error>;
}

/// A resolver for contexts where file leaves must not appear.
pub struct NoFiles;

impl Resolver for NoFiles {
    fn h_table(&self, path: &str) -> Result<BTreeMap<BinaryString, u32>, Error> {
        Err(Error::Expr {
            offset: 0,
            msg: format!("no file access to resolve table:{path}"),
        })
    }

    fn tree_family(&self, path: &str) -> Result<TreeFamily, Error> {
        Err(Error::Expr {
            offset: 0,
            msg: format!("no file access to resolve mixture:{path}"),
        })
    }
}

/// Either side of the expression grammar.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedExpr {
    Measure(PreMeasureSpec),
    Rule(RuleSpec),
}

pub fn parse_measure(text: &str, resolver: &dyn Resolver) -> Result<PreMeasureSpec, Error> {
    let mut p = Parser::new(text, resolver);
    let m = p.measure()?;
    p.finish()?;
    Ok(m)
}

pub fn parse_rule(text: &str, resolver: &dyn Resolver) -> Result<RuleSpec, Error> {
    let mut p = Parser::new(text, resolver);
    let r = p.rule()?;
    p.finish()?;
    Ok(r)
}

/// Dispatches on the leading keyword.
pub fn parse_expression(text: &str, resolver: &dyn Resolver) -> Result<ParsedExpr, Error> {
    let mut p = Parser::new(text, resolver);
    p.skip_ws();
    let start = p.pos;
    let word = p.peek_ident();
    p.pos = start;
    let out = match word.as_str() {
        "dwt" | "pwt" | "dct" | "pct" | "sum" | "min" | "star" | "rsqrt" | "mixture" => {
            ParsedExpr::Measure(p.measure()?)
        }
        "kp" | "ka" | "ks" | "kd" | "and" | "or" | "msqrt" => ParsedExpr::Rule(p.rule()?),
        other => {
            return Err(Error::Expr {
                offset: start,
                msg: if other.is_empty() {
                    "expected an expression".into()
                } else {
                    format!("unknown identifier {other:?}")
                },
            })
        }
    };
    p.finish()?;
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    resolver: &'a dyn Resolver,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, resolver: &'a dyn Resolver) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            resolver,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Expr {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", c as char)))
        }
    }

    fn finish(&mut self) -> Result<(), Error> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    /// Consumes up to (not including) `,`, `)` or end of input.
    fn path(&mut self) -> Result<String, Error> {
        let start = self.pos;
        while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b',' | b')') {
            self.pos += 1;
        }
        let path = self.text[start..self.pos].trim().to_string();
        if path.is_empty() {
            self.pos = start;
            return Err(self.err("expected a path"));
        }
        Ok(path)
    }

    fn number(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Expr {
                offset: start,
                msg: "expected a number".into(),
            })
    }

    fn h(&mut self) -> Result<HSpec, Error> {
        self.skip_ws();
        let start = self.pos;
        let word = self.peek_ident();
        match word.as_str() {
            "len" => Ok(HSpec::Length),
            "scaled" => {
                self.expect(b':')?;
                let p = self.number()?;
                self.expect(b'/')?;
                let q_pos = self.pos;
                let q = self.number()?;
                if q == 0 {
                    return Err(Error::Expr {
                        offset: q_pos,
                        msg: "scaled denominator must be positive".into(),
                    });
                }
                Ok(HSpec::scaled(p, q))
            }
            "table" => {
                self.expect(b':')?;
                let path = self.path()?;
                let map = self.resolver.h_table(&path)?;
                Ok(HSpec::Table { name: path, map })
            }
            other => Err(Error::Expr {
                offset: start,
                msg: if other.is_empty() {
                    "expected an h specification".into()
                } else {
                    format!("unknown h specification {other:?}")
                },
            }),
        }
    }

    fn measure(&mut self) -> Result<PreMeasureSpec, Error> {
        self.skip_ws();
        let start = self.pos;
        let word = self.peek_ident();
        let h_leaf = |p: &mut Self, make: fn(HSpec) -> PreMeasureSpec| {
            p.expect(b'(')?;
            let h = p.h()?;
            p.expect(b')')?;
            Ok(make(h))
        };
        match word.as_str() {
            "dwt" => h_leaf(self, PreMeasureSpec::Dwt),
            "pwt" => h_leaf(self, PreMeasureSpec::Pwt),
            "dct" => h_leaf(self, PreMeasureSpec::Dct),
            "pct" => h_leaf(self, PreMeasureSpec::Pct),
            "sum" | "min" => {
                self.expect(b'(')?;
                let a = self.measure()?;
                self.expect(b',')?;
                let b = self.measure()?;
                self.expect(b')')?;
                Ok(if word == "sum" {
                    PreMeasureSpec::Sum(Box::new(a), Box::new(b))
                } else {
                    PreMeasureSpec::Min(Box::new(a), Box::new(b))
                })
            }
            "star" => {
                self.expect(b'(')?;
                let m = self.measure()?;
                self.expect(b')')?;
                Ok(m.star())
            }
            "rsqrt" => {
                self.expect(b'(')?;
                let r = self.rule()?;
                self.expect(b')')?;
                Ok(PreMeasureSpec::rule_sqrt(r, crate::duality::DEFAULT_CAP))
            }
            "mixture" => {
                self.expect(b':')?;
                let path = self.path()?;
                Ok(PreMeasureSpec::TreeMixture(
                    self.resolver.tree_family(&path)?,
                ))
            }
            other => Err(Error::Expr {
                offset: start,
                msg: if other.is_empty() {
                    "expected a measure expression".into()
                } else {
                    format!("unknown identifier {other:?}")
                },
            }),
        }
    }

    fn rule(&mut self) -> Result<RuleSpec, Error> {
        self.skip_ws();
        let start = self.pos;
        let word = self.peek_ident();
        let h_leaf = |p: &mut Self, make: fn(HSpec) -> RuleSpec| {
            p.expect(b'(')?;
            let h = p.h()?;
            p.expect(b')')?;
            Ok(make(h))
        };
        match word.as_str() {
            "kp" => h_leaf(self, RuleSpec::Kp),
            "ka" => h_leaf(self, RuleSpec::Ka),
            "ks" => h_leaf(self, RuleSpec::Ks),
            "kd" => h_leaf(self, RuleSpec::Kd),
            "and" | "or" => {
                self.expect(b'(')?;
                let a = self.rule()?;
                self.expect(b',')?;
                let b = self.rule()?;
                self.expect(b')')?;
                Ok(if word == "and" {
                    RuleSpec::and(a, b)
                } else {
                    RuleSpec::or(a, b)
                })
            }
            "msqrt" => {
                self.expect(b'(')?;
                let m = self.measure()?;
                self.expect(b')')?;
                Ok(RuleSpec::measure_sqrt(m))
            }
            other => Err(Error::Expr {
                offset: start,
                msg: if other.is_empty() {
                    "expected a rule expression".into()
                } else {
                    format!("unknown identifier {other:?}")
                },
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_measures_parse() {
        assert_eq!(
            parse_measure("dwt(len)", &NoFiles).unwrap(),
            PreMeasureSpec::Dwt(HSpec::Length)
        );
        assert_eq!(
            parse_measure("pct(scaled:1/2)", &NoFiles).unwrap(),
            PreMeasureSpec::Pct(HSpec::scaled(1, 2))
        );
    }

    #[test]
    fn nested_expressions_parse() {
        let m = parse_measure("msqrt-free", &NoFiles);
        assert!(m.is_err());
        let m = parse_measure("rsqrt(kp(len))", &NoFiles).unwrap();
        assert!(matches!(m, PreMeasureSpec::RuleSqrt { .. }));
        let m = parse_measure("star(sum(dwt(len),min(dwt(scaled:1/2),pwt(len))))", &NoFiles);
        assert!(m.is_ok());
        let r = parse_rule("msqrt(star(dwt(scaled:1/2)))", &NoFiles).unwrap();
        assert_eq!(r.to_string(), "msqrt(star(dwt(scaled:1/2)))");
    }

    #[test]
    fn syntax_error_offsets() {
        match parse_measure("dwt(", &NoFiles) {
            Err(Error::Expr { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected offset-4 error, got {other:?}"),
        }
        match parse_measure("dwt(len) junk", &NoFiles) {
            Err(Error::Expr { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("expected trailing-input error, got {other:?}"),
        }
        match parse_expression("frobnicate(len)", &NoFiles) {
            Err(Error::Expr { offset: 0, msg }) => assert!(msg.contains("frobnicate")),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
        assert!(parse_measure("dwt(scaled:1/0)", &NoFiles).is_err());
    }

    #[test]
    fn expression_dispatch() {
        assert!(matches!(
            parse_expression("dwt(len)", &NoFiles).unwrap(),
            ParsedExpr::Measure(_)
        ));
        assert!(matches!(
            parse_expression("and(kp(len),ks(len))", &NoFiles).unwrap(),
            ParsedExpr::Rule(_)
        ));
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let texts = [
            "dwt(len)",
            "pwt(scaled:3/4)",
            "sum(dwt(len),dct(len))",
            "min(pct(len),star(dwt(len)))",
            "rsqrt(or(kp(len),and(ka(len),kd(scaled:1/2))))",
        ];
        for t in texts {
            let m = parse_measure(t, &NoFiles).unwrap();
            assert_eq!(m.to_string(), t);
            assert_eq!(parse_measure(&m.to_string(), &NoFiles).unwrap(), m);
        }
    }

    #[test]
    fn table_resolution_goes_through_the_resolver() {
        struct Stub;
        impl Resolver for Stub {
            fn h_table(&self, path: &str) -> Result<BTreeMap<BinaryString, u32>, Error> {
                assert_eq!(path, "fixture.txt");
                Ok([("0".parse().unwrap(), 3u32)].into_iter().collect())
            }
            fn tree_family(&self, _: &str) -> Result<TreeFamily, Error> {
                unimplemented!()
            }
        }
        let m = parse_measure("dwt(table:fixture.txt)", &Stub).unwrap();
        match m {
            PreMeasureSpec::Dwt(HSpec::Table { name, map }) => {
                assert_eq!(name, "fixture.txt");
                assert_eq!(map.len(), 1);
            }
            other => panic!("unexpected parse {other:?}"),
        }
        assert!(parse_measure("dwt(table:x)", &NoFiles).is_err());
    }
}
