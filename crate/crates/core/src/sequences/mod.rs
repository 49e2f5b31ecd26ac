//! Coefficient sequences indexed from 1 and their `r`-step forward differences.

mod descriptor;
mod expr;

use num_complex::Complex64;
use thiserror::Error;

pub use descriptor::SequenceDescriptor;
pub use expr::{BinOp, Expr, Func, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("index {0} is outside the domain n >= 1")]
    Domain(i64),
    #[error("step r = {0} must be at least 1")]
    Step(i64),
    #[error("unknown sequence family '{0}'")]
    UnknownFamily(String),
    #[error("invalid parameter {name}: {msg}")]
    Parameter { name: &'static str, msg: String },
    #[error("expression error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("term {n} is not finite ({value})")]
    NonFinite { n: u64, value: Complex64 },
    #[error("invalid sequence descriptor: {0}")]
    Descriptor(String),
}

/// Parameters of the mod-6 piecewise sequence that lies in `GM(p, β₃(1), 3)`
/// but not in `GM(1, β₃(1), 3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleParams {
    p: f64,
}

impl CounterexampleParams {
    pub fn new(p: f64) -> Result<Self, SequenceError> {
        if !(p.is_finite() && p > 1.0) {
            return Err(SequenceError::Parameter {
                name: "p",
                msg: format!("counterexample requires p > 1, got {p}"),
            });
        }
        Ok(CounterexampleParams { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Closed form of the n-th term, n >= 1.
    ///
    /// Residue classes: n ≡ 1 (mod 3) carries the factor 3; n ≡ 2 (mod 3) and
    /// n ≡ 3 (mod 6) are the plain `1/(n ln(n+1))`; n ≡ 0 (mod 6) repeats the
    /// value three places earlier plus a `n^-(1+1/p)` bump.
    pub fn term(&self, n: u64) -> f64 {
        let x = n as f64;
        let plain = |k: f64| 1.0 / (k * (k + 1.0).ln());
        match n % 6 {
            1 | 4 => 3.0 * plain(x),
            2 | 5 | 3 => plain(x),
            _ => {
                let bump = 1.0 / (x.powf(1.0 + 1.0 / self.p) * (x + 1.0).ln());
                1.0 / ((x - 3.0) * (x - 2.0).ln()) + bump
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    ClosedForm(Expr),
    /// `(-1)^n / n^exponent`
    AlternatingHarmonic {
        exponent: f64,
    },
    /// `amplitude / (n^power · ln(n+1)^log_power)`
    PowerLog {
        amplitude: f64,
        power: f64,
        log_power: f64,
    },
    Counterexample(CounterexampleParams),
    /// Finite table `a_1, …, a_len`, zero beyond.
    UserTable(Vec<Complex64>),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::ClosedForm(_) => "closed_form",
            Family::AlternatingHarmonic { .. } => "alternating_harmonic",
            Family::PowerLog { .. } => "power_log",
            Family::Counterexample(_) => "counterexample",
            Family::UserTable(_) => "user_table",
        }
    }
}

/// A complex coefficient sequence `(a_n)_{n >= 1}`, evaluated lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    family: Family,
}

impl Sequence {
    pub fn new(family: Family) -> Self {
        Sequence { family }
    }

    pub fn closed_form(source: &str) -> Result<Self, SequenceError> {
        Ok(Sequence::new(Family::ClosedForm(Expr::parse(source)?)))
    }

    pub fn alternating_harmonic(exponent: f64) -> Result<Self, SequenceError> {
        check_finite("exponent", exponent)?;
        Ok(Sequence::new(Family::AlternatingHarmonic { exponent }))
    }

    pub fn power_log(amplitude: f64, power: f64, log_power: f64) -> Result<Self, SequenceError> {
        check_finite("amplitude", amplitude)?;
        check_finite("power", power)?;
        check_finite("log_power", log_power)?;
        Ok(Sequence::new(Family::PowerLog {
            amplitude,
            power,
            log_power,
        }))
    }

    pub fn counterexample(p: f64) -> Result<Self, SequenceError> {
        Ok(Sequence::new(Family::Counterexample(CounterexampleParams::new(p)?)))
    }

    pub fn table<I>(values: I) -> Result<Self, SequenceError>
    where
        I: IntoIterator,
        I::Item: Into<Complex64>,
    {
        let values: Vec<Complex64> = values.into_iter().map(Into::into).collect();
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(SequenceError::NonFinite {
                n: i as u64 + 1,
                value: values[i],
            });
        }
        Ok(Sequence::new(Family::UserTable(values)))
    }

    pub fn zero() -> Self {
        Sequence::new(Family::UserTable(Vec::new()))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// True when every term is real; lets callers skip imaginary bookkeeping.
    pub fn is_real(&self) -> bool {
        match &self.family {
            Family::UserTable(values) => values.iter().all(|v| v.im == 0.0),
            Family::ClosedForm(_) => false,
            _ => true,
        }
    }

    pub fn term(&self, n: u64) -> Result<Complex64, SequenceError> {
        if n == 0 {
            return Err(SequenceError::Domain(0));
        }
        let value = match &self.family {
            Family::ClosedForm(expr) => expr.eval(n),
            Family::AlternatingHarmonic { exponent } => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign / (n as f64).powf(*exponent), 0.0)
            }
            Family::PowerLog {
                amplitude,
                power,
                log_power,
            } => {
                let x = n as f64;
                Complex64::new(amplitude / (x.powf(*power) * (x + 1.0).ln().powf(*log_power)), 0.0)
            }
            Family::Counterexample(params) => Complex64::new(params.term(n), 0.0),
            Family::UserTable(values) => values
                .get((n - 1) as usize)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0)),
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(SequenceError::NonFinite { n, value });
        }
        Ok(value)
    }

    /// `Δ_r a_n = a_n − a_{n+r}`.
    pub fn delta_r(&self, n: u64, r: u64) -> Result<Complex64, SequenceError> {
        if n == 0 {
            return Err(SequenceError::Domain(0));
        }
        if r == 0 {
            return Err(SequenceError::Step(0));
        }
        Ok(self.term(n)? - self.term(n + r)?)
    }

    /// Evaluates `a_1..=a_len` once so repeated window sums stay cheap.
    pub fn tabulate(&self, len: u64) -> Result<TermTable, SequenceError> {
        let values = (1..=len).map(|n| self.term(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(TermTable { values })
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<(), SequenceError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(SequenceError::Parameter {
            name,
            msg: format!("must be finite, got {v}"),
        })
    }
}

/// Materialised prefix `a_1..=a_len` of a sequence, indexed from 1.
#[derive(Debug, Clone)]
pub struct TermTable {
    values: Vec<Complex64>,
}

impl TermTable {
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n`; panics when `n` is 0 or beyond the table.
    #[inline]
    pub fn get(&self, n: u64) -> Complex64 {
        self.values[(n - 1) as usize]
    }

    #[inline]
    pub fn delta(&self, n: u64, r: u64) -> Complex64 {
        self.get(n) - self.get(n + r)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }
}
