//! Textual class specifications, e.g. `gm(p=2,beta3,q=1,r=3)`, `gms`,
//! `mvbvs(lambda=2)`, `sbvs2(b=sqrt)`, `rbvs(tail=1048576)`.
//!
//! ```text
//! spec  := name [ '(' [ item (',' item)* ] ')' ]
//! item  := key '=' value | flag
//! ```
//!
//! `gm` accepts `p`, `r`, one of the flags `beta1|beta2|beta3`, `c` (β₂
//! scale), `q`, `b` (`n`, `sqrt` or `<k>n`) and `mcap` (β₃).

use std::fmt;

use super::{
    is_gms, is_mvbvs, is_rbvs_window, is_sbvs2, membership_profile, BSchedule, BetaSpec, ClassError, ClassParams,
    MembershipProfile, ProfileOptions, DEFAULT_M_CAP, DEFAULT_TAIL_CAP,
};
use crate::sequences::Sequence;

const MAX_SPEC_LEN: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassSpec {
    Gm(ClassParams),
    Gms,
    Mvbvs { lambda: f64 },
    Sbvs2 { b_schedule: BSchedule, m_cap: u64 },
    Rbvs { tail_cap: u64 },
}

fn bad(msg: impl Into<String>) -> ClassError {
    ClassError::Parameter {
        name: "class",
        msg: msg.into(),
    }
}

impl ClassSpec {
    pub fn parse(text: &str) -> Result<ClassSpec, ClassError> {
        if text.len() > MAX_SPEC_LEN {
            return Err(bad(format!("specification longer than {MAX_SPEC_LEN} bytes")));
        }
        let text = text.trim();
        let (name, body) = match text.find('(') {
            Some(open) => {
                let rest = &text[open + 1..];
                let inner = rest.strip_suffix(')').ok_or_else(|| bad("missing closing ')'"))?;
                (text[..open].trim(), Some(inner))
            }
            None => (text, None),
        };
        let items: Vec<Item> = match body {
            Some(inner) if !inner.trim().is_empty() => inner.split(',').map(Item::parse).collect::<Result<_, _>>()?,
            _ => Vec::new(),
        };
        let mut args = Args {
            items,
            used: Vec::new(),
        };

        let spec = match name.to_ascii_lowercase().as_str() {
            "gm" => {
                let mut flags = Vec::new();
                for item in &args.items {
                    if let Item::Flag(f) = item {
                        flags.push(f.clone());
                    }
                }
                let kind = match flags.as_slice() {
                    [] => "beta1".to_string(),
                    [one] => one.clone(),
                    _ => return Err(bad("more than one majorant flag")),
                };
                args.used.push(kind.clone());
                let p = args.number("p")?.unwrap_or(1.0);
                let r = args.integer("r")?.unwrap_or(1);
                let beta = match kind.as_str() {
                    "beta1" => BetaSpec::Beta1,
                    "beta2" => BetaSpec::Beta2 {
                        c_scale: args.number("c")?.unwrap_or(2.0),
                    },
                    "beta3" => BetaSpec::Beta3 {
                        q: args.number("q")?.unwrap_or(1.0),
                        b_schedule: args.schedule("b")?.unwrap_or(BSchedule::Identity),
                        m_cap: args.integer("mcap")?.unwrap_or(DEFAULT_M_CAP),
                    },
                    other => return Err(bad(format!("unknown majorant '{other}'"))),
                };
                ClassSpec::Gm(ClassParams::new(p, beta, r)?)
            }
            "gms" => ClassSpec::Gms,
            "mvbvs" => ClassSpec::Mvbvs {
                lambda: args.number("lambda")?.unwrap_or(2.0),
            },
            "sbvs2" => ClassSpec::Sbvs2 {
                b_schedule: args.schedule("b")?.unwrap_or(BSchedule::Identity),
                m_cap: args.integer("mcap")?.unwrap_or(DEFAULT_M_CAP),
            },
            "rbvs" => ClassSpec::Rbvs {
                tail_cap: args.integer("tail")?.unwrap_or(DEFAULT_TAIL_CAP),
            },
            other => return Err(bad(format!("unknown class '{other}'"))),
        };
        args.finish()?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), ClassError> {
        match *self {
            ClassSpec::Gm(params) => ClassParams::new(params.p, params.beta, params.r).map(|_| ()),
            ClassSpec::Gms => Ok(()),
            ClassSpec::Mvbvs { lambda } if lambda.is_finite() && lambda >= 2.0 => Ok(()),
            ClassSpec::Mvbvs { lambda } => Err(ClassError::Parameter {
                name: "lambda",
                msg: format!("must be >= 2, got {lambda}"),
            }),
            ClassSpec::Sbvs2 { b_schedule, m_cap } => BetaSpec::Beta3 {
                q: 1.0,
                b_schedule,
                m_cap,
            }
            .validate(),
            ClassSpec::Rbvs { tail_cap } if tail_cap >= 4 => Ok(()),
            ClassSpec::Rbvs { .. } => Err(ClassError::Parameter {
                name: "tail_cap",
                msg: "must be at least 4".into(),
            }),
        }
    }

    pub fn evaluate(
        &self,
        seq: &Sequence,
        m_grid: &[u64],
        options: &ProfileOptions,
    ) -> Result<MembershipProfile, ClassError> {
        match *self {
            ClassSpec::Gm(params) => membership_profile(seq, &params, m_grid, options),
            ClassSpec::Gms => is_gms(seq, m_grid, options),
            ClassSpec::Mvbvs { lambda } => is_mvbvs(seq, lambda, m_grid, options),
            ClassSpec::Sbvs2 { b_schedule, m_cap } => is_sbvs2(seq, b_schedule, m_cap, m_grid, options),
            ClassSpec::Rbvs { tail_cap } => is_rbvs_window(seq, tail_cap, m_grid, options),
        }
    }
}

fn fmt_schedule(s: BSchedule) -> String {
    match s {
        BSchedule::Identity => "n".into(),
        BSchedule::Multiple(k) => format!("{k}n"),
        BSchedule::Sqrt => "sqrt".into(),
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::Gm(params) => {
                write!(f, "gm(p={}", params.p)?;
                match params.beta {
                    BetaSpec::Beta1 => write!(f, ",beta1")?,
                    BetaSpec::Beta2 { c_scale } => write!(f, ",beta2,c={c_scale}")?,
                    BetaSpec::Beta3 { q, b_schedule, m_cap } => {
                        write!(f, ",beta3,q={q},b={},mcap={m_cap}", fmt_schedule(b_schedule))?
                    }
                }
                write!(f, ",r={})", params.r)
            }
            ClassSpec::Gms => f.write_str("gms"),
            ClassSpec::Mvbvs { lambda } => write!(f, "mvbvs(lambda={lambda})"),
            ClassSpec::Sbvs2 { b_schedule, m_cap } => {
                write!(f, "sbvs2(b={},mcap={m_cap})", fmt_schedule(*b_schedule))
            }
            ClassSpec::Rbvs { tail_cap } => write!(f, "rbvs(tail={tail_cap})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Pair(String, String),
    Flag(String),
}

impl Item {
    fn parse(raw: &str) -> Result<Item, ClassError> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(bad("empty item"));
        }
        match raw.split_once('=') {
            Some((k, v)) => {
                let (k, v) = (k.trim(), v.trim());
                if k.is_empty() || v.is_empty() {
                    return Err(bad(format!("malformed item '{raw}'")));
                }
                Ok(Item::Pair(k.to_ascii_lowercase(), v.to_string()))
            }
            None => Ok(Item::Flag(raw.to_ascii_lowercase())),
        }
    }
}

struct Args {
    items: Vec<Item>,
    used: Vec<String>,
}

impl Args {
    fn raw(&mut self, key: &str) -> Result<Option<String>, ClassError> {
        let mut found = None;
        for item in &self.items {
            if let Item::Pair(k, v) = item {
                if k == key {
                    if found.is_some() {
                        return Err(bad(format!("'{key}' given twice")));
                    }
                    found = Some(v.clone());
                }
            }
        }
        self.used.push(key.to_string());
        Ok(found)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, ClassError> {
        self.raw(key)?
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad(format!("'{key}' expects a number, got '{v}'")))
            })
            .transpose()
    }

    fn integer(&mut self, key: &str) -> Result<Option<u64>, ClassError> {
        self.raw(key)?
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("'{key}' expects a positive integer, got '{v}'")))
            })
            .transpose()
    }

    fn schedule(&mut self, key: &str) -> Result<Option<BSchedule>, ClassError> {
        self.raw(key)?
            .map(|v| match v.as_str() {
                "n" | "identity" => Ok(BSchedule::Identity),
                "sqrt" => Ok(BSchedule::Sqrt),
                other => other
                    .strip_suffix('n')
                    .and_then(|k| k.parse::<u64>().ok())
                    .filter(|&k| k >= 1)
                    .map(BSchedule::Multiple)
                    .ok_or_else(|| bad(format!("unknown schedule '{other}'"))),
            })
            .transpose()
    }

    fn finish(self) -> Result<(), ClassError> {
        for item in &self.items {
            let key = match item {
                Item::Pair(k, _) => k,
                Item::Flag(f) => f,
            };
            if !self.used.contains(key) {
                return Err(bad(format!("unexpected item '{key}'")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_counterexample_class() {
        let spec = ClassSpec::parse("gm(p=2,beta3,q=1,r=3)").unwrap();
        let ClassSpec::Gm(params) = spec else { panic!() };
        assert_eq!(params.p, 2.0);
        assert_eq!(params.r, 3);
        assert_eq!(
            params.beta,
            BetaSpec::Beta3 {
                q: 1.0,
                b_schedule: BSchedule::Identity,
                m_cap: DEFAULT_M_CAP
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "gm(p=2,beta3,q=1,r=3)",
            "gm(p=1.5,beta2,c=3,r=2)",
            "gm(beta3,b=sqrt,mcap=100)",
            "gm(b=4n,beta3)",
            "gm",
            "gms",
            "mvbvs(lambda=3)",
            "sbvs2",
            "rbvs(tail=4096)",
        ] {
            let spec = ClassSpec::parse(text).unwrap();
            assert_eq!(ClassSpec::parse(&spec.to_string()).unwrap(), spec, "{text}");
        }
    }

    #[test]
    fn rejects_malformed_specs() {
        for text in [
            "gm(p=2",
            "gm(p=0)",
            "gm(p=x)",
            "gm(beta1,beta3)",
            "gm(beta9)",
            "gm(p=1,p=2)",
            "gm(r=0)",
            "gm(z=1)",
            "gm(beta2,c=1)",
            "gm(beta3,q=-1)",
            "gm(beta3,b=0n)",
            "mvbvs(lambda=1.5)",
            "rbvs(tail=2)",
            "hölder",
            "gm(,)",
            "gm(p=)",
        ] {
            assert!(ClassSpec::parse(text).is_err(), "{text}");
        }
    }
}
