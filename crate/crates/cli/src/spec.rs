//! The measure mini-language.
//!
//! ```text
//! spec     = "lebesgue"
//!          | "powerweight:s=" decimal
//!          | "atoms:[" pair { "," pair } "]"
//!          | "counterexample:K=" int
//! pair     = "(" decimal "," decimal ")"
//! decimal  = [ "+" | "-" ] digits [ "." digits ] [ ( "e" | "E" ) [ "+" | "-" ] digits ]
//! int      = digits
//! digits   = "0".."9" { "0".."9" }
//! ```
//!
//! Matching is exact and case-sensitive, and no whitespace is allowed
//! anywhere. In a pair the first number is the atom position `t ∈ [0, 1)`,
//! the second its mass. Errors carry the byte offset where matching stopped.

use std::fmt;

use hankel_lab::measure::{DiskDensityMeasure, MomentSequence, RadialMeasure};

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Radial(RadialMeasure),
    /// Truncation `K` of the density with bounded reproducing-kernel
    /// condition and unbounded Hankel form.
    Counterexample(u32),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("measure spec `{input}`: at byte {position}: {message}")]
pub struct SpecError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl MeasureSpec {
    pub fn parse(input: &str) -> Result<Self, SpecError> {
        let mut p = Parser { input, pos: 0 };
        let spec = p.spec()?;
        if p.pos != input.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    pub fn radial(&self) -> Option<&RadialMeasure> {
        match self {
            MeasureSpec::Radial(mu) => Some(mu),
            MeasureSpec::Counterexample(_) => None,
        }
    }

    /// Moments (conjugate moments for the counterexample) `0..=n_max`.
    pub fn moments(&self, n_max: usize) -> hankel_lab::Result<MomentSequence> {
        match self {
            MeasureSpec::Radial(mu) => Ok(mu.moment_sequence(n_max)),
            MeasureSpec::Counterexample(k) => Ok(DiskDensityMeasure::counterexample(*k)?.moment_sequence(n_max)),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Radial(mu) => mu.fmt(f),
            MeasureSpec::Counterexample(k) => write!(f, "counterexample:K={k}"),
        }
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> SpecError {
        SpecError {
            input: self.input.to_owned(),
            position: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.input[self.pos..]
    }

    fn eat(&mut self, literal: &str) -> bool {
        if self.rest().starts_with(literal) {
            self.pos += literal.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, literal: &str) -> Result<(), SpecError> {
        if self.eat(literal) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{literal}`")))
        }
    }

    fn spec(&mut self) -> Result<MeasureSpec, SpecError> {
        let start = self.pos;
        if self.eat("lebesgue") {
            return Ok(MeasureSpec::Radial(RadialMeasure::lebesgue()));
        }
        if self.eat("powerweight:s=") {
            let at = self.pos;
            let s = self.decimal()?;
            return RadialMeasure::power_weight(s)
                .map(MeasureSpec::Radial)
                .map_err(|e| self.error_at(at, e.to_string()));
        }
        if self.eat("atoms:[") {
            let mut pairs = vec![self.pair()?];
            while self.eat(",") {
                pairs.push(self.pair()?);
            }
            self.expect("]")?;
            return RadialMeasure::atoms_from_pairs(&pairs)
                .map(MeasureSpec::Radial)
                .map_err(|e| self.error_at(start, e.to_string()));
        }
        if self.eat("counterexample:K=") {
            let at = self.pos;
            let k = self.int()?;
            return DiskDensityMeasure::counterexample(k)
                .map(|_| MeasureSpec::Counterexample(k))
                .map_err(|e| self.error_at(at, e.to_string()));
        }
        Err(self.error("expected one of `lebesgue`, `powerweight:s=`, `atoms:[`, `counterexample:K=`"))
    }

    fn error_at(&self, position: usize, message: String) -> SpecError {
        SpecError {
            input: self.input.to_owned(),
            position,
            message,
        }
    }

    fn pair(&mut self) -> Result<(f64, f64), SpecError> {
        self.expect("(")?;
        let t = self.decimal()?;
        self.expect(",")?;
        let m = self.decimal()?;
        self.expect(")")?;
        Ok((t, m))
    }

    fn digits(&mut self) -> Result<(), SpecError> {
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return Err(self.error("expected a digit"));
        }
        self.pos += n;
        Ok(())
    }

    fn decimal(&mut self) -> Result<f64, SpecError> {
        let start = self.pos;
        let _ = self.eat("+") || self.eat("-");
        self.digits()?;
        if self.eat(".") {
            self.digits()?;
        }
        if self.eat("e") || self.eat("E") {
            let _ = self.eat("+") || self.eat("-");
            self.digits()?;
        }
        let text = &self.input[start..self.pos];
        text.parse()
            .map_err(|_| self.error_at(start, format!("`{text}` is not a number")))
    }

    fn int(&mut self) -> Result<u32, SpecError> {
        let start = self.pos;
        self.digits()?;
        let text = &self.input[start..self.pos];
        text.parse()
            .map_err(|_| self.error_at(start, format!("`{text}` does not fit an integer")))
    }
}
