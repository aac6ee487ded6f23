//! Sequence-spec grammar.
//!
//! ```text
//! spec  := "gevrey:s=" FLOAT
//!        | "qgevrey:q=" FLOAT
//!        | "table:" PATH            (CSV with header `p,logM`)
//!        | "shift(" spec ")"
//!        | "pow(" spec "," FLOAT ")"
//!        | "lcmin(" spec ")"
//!        | "interp(" spec ",r=" INT ")"
//! ```
//!
//! `lcmin` needs a finite window to take the hull over, so the parser carries
//! a materialization horizon (the CLI passes its `--horizon`); the result is a
//! finite table unless the operand was already log-convex.

use crate::error::{Error, Result};
use crate::weight::WeightSequence;

/// Hull window used by `lcmin(...)` when no horizon is supplied.
pub const DEFAULT_LCMIN_HORIZON: usize = 10_000;

/// Parse a sequence spec with the default `lcmin` horizon.
pub fn make_sequence(spec: &str) -> Result<WeightSequence> {
    make_sequence_with(spec, DEFAULT_LCMIN_HORIZON)
}

/// Parse a sequence spec, materializing `lcmin` combinators at `lcmin_horizon`.
pub fn make_sequence_with(spec: &str, lcmin_horizon: usize) -> Result<WeightSequence> {
    let mut p = Parser { input: spec, pos: 0, lcmin_horizon };
    let seq = p.parse_spec()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("trailing input"));
    }
    Ok(seq)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
    lcmin_horizon: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn parse_float(&mut self) -> Result<f64> {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, ch)| !matches!(ch, '0'..='9' | '.' | '-' | '+' | 'e' | 'E'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected a number"));
        }
        let text = &rest[..end];
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("invalid number `{text}`")))?;
        self.pos += end;
        Ok(value)
    }

    fn parse_int(&mut self) -> Result<u32> {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, ch)| !ch.is_ascii_digit())
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &rest[..end];
        let value: u32 = text
            .parse()
            .map_err(|_| self.error(format!("invalid integer `{text}`")))?;
        self.pos += end;
        Ok(value)
    }

    fn parse_spec(&mut self) -> Result<WeightSequence> {
        self.skip_ws();
        if self.eat("gevrey:s=") {
            let s = self.parse_float()?;
            WeightSequence::gevrey(s)
        } else if self.eat("qgevrey:q=") {
            let q = self.parse_float()?;
            WeightSequence::qgevrey(q)
        } else if self.eat("table:") {
            let rest = self.rest();
            let end = rest.find([',', ')']).unwrap_or(rest.len());
            let path = &rest[..end];
            if path.is_empty() {
                return Err(self.error("expected a file path after `table:`"));
            }
            self.pos += end;
            load_table(path)
        } else if self.eat("shift(") {
            let base = self.parse_spec()?;
            self.expect(")")?;
            base.shift()
        } else if self.eat("pow(") {
            let base = self.parse_spec()?;
            self.expect(",")?;
            self.skip_ws();
            let e = self.parse_float()?;
            self.expect(")")?;
            base.power(e)
        } else if self.eat("lcmin(") {
            let base = self.parse_spec()?;
            self.expect(")")?;
            base.lc_minorant(self.lcmin_horizon)
        } else if self.eat("interp(") {
            let base = self.parse_spec()?;
            self.expect(",")?;
            self.skip_ws();
            self.expect("r=")?;
            let r = self.parse_int()?;
            self.expect(")")?;
            if r < 1 {
                return Err(self.error("interp requires r >= 1"));
            }
            base.interpolate(r)
        } else {
            Err(self.error(
                "expected one of gevrey:s=, qgevrey:q=, table:, shift(, pow(, lcmin(, interp(",
            ))
        }
    }
}

/// Load a `p,logM` CSV table with contiguous indices from 0.
fn load_table(path: &str) -> Result<WeightSequence> {
    let text = std::fs::read_to_string(path)?;
    let mut logs = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "p,logM" => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("table header must be `p,logM`, found `{header}`"),
            })
        }
        None => return Err(Error::Parse { pos: 0, msg: "empty table file".into() }),
    }
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (p_text, v_text) = line.split_once(',').ok_or_else(|| Error::Parse {
            pos: lineno,
            msg: format!("line {}: expected `p,logM`", lineno + 1),
        })?;
        let p: usize = p_text.trim().parse().map_err(|_| Error::Parse {
            pos: lineno,
            msg: format!("line {}: bad index `{p_text}`", lineno + 1),
        })?;
        if p != logs.len() {
            return Err(Error::Parse {
                pos: lineno,
                msg: format!("line {}: indices must be contiguous from 0, found {p}", lineno + 1),
            });
        }
        let v: f64 = v_text.trim().parse().map_err(|_| Error::Parse {
            pos: lineno,
            msg: format!("line {}: bad value `{v_text}`", lineno + 1),
        })?;
        logs.push(v);
    }
    WeightSequence::from_log_values(&format!("table:{path}"), logs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        let g = make_sequence("gevrey:s=1.5").unwrap();
        assert_eq!(g.label(), "gevrey:s=1.5");
        let q = make_sequence("qgevrey:q=2").unwrap();
        assert!((q.log_value(2).unwrap() - 4.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn parses_nested_combinators() {
        let s = make_sequence("pow(shift(gevrey:s=2),0.5)").unwrap();
        let base = make_sequence("gevrey:s=2").unwrap().shift().unwrap();
        for p in 0..=30 {
            let want = 0.5 * base.log_value(p).unwrap();
            assert!((s.log_value(p).unwrap() - want).abs() < 1e-12);
        }
        let i = make_sequence("interp(gevrey:s=1,r=2)").unwrap();
        assert!((i.log_value(3).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn reports_error_position() {
        match make_sequence("pow(gevrey:s=2;0.5)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("expected parse error, got {other:?}"),
        }
        match make_sequence("gevreyy:s=1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn loads_csv_table() {
        let dir = std::env::temp_dir().join("carleman-grammar-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        std::fs::write(&path, "p,logM\n0,0.0\n1,0.0\n2,1.386294\n").unwrap();
        let spec = format!("table:{}", path.display());
        let t = make_sequence(&spec).unwrap();
        assert_eq!(t.log_value(0).unwrap(), 0.0);
        assert!((t.log_value(2).unwrap() - 1.386294).abs() < 1e-12);
        assert!(t.log_value(3).is_err());
    }
}
