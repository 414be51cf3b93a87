//! Command-line front end: argument parsing, job execution and output.

pub mod cache;
pub mod classes;
pub mod report;
pub mod verify;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use flagqk::algebra::DEFAULT_ORDER;
use flagqk::gkm::{Cohomology, KTheory};
use flagqk::kgkm::KClass;
use flagqk::lines::{count_lines, is_line_degree, kgw_line, kgw_zero, line_parabolic};
use flagqk::qkbig::QuantumK;
use flagqk::{CartanType, Error, FlagVariety, Limits};

use cache::{Cache, CACHE_ENV};
use report::{BasisInfo, Description, LineInfo, Report, SpaceInfo};
use verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "flagqk",
    version,
    about = "Quantum K-theory of flag varieties modulo line degrees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Root system: a family letter with --rank, or a full name such as A3.
    #[arg(long = "type", global = true)]
    pub cartan_type: Option<String>,

    #[arg(long, global = true)]
    pub rank: Option<usize>,

    /// Simple roots of the Levi of P, 1-based and comma-separated (empty: G/B).
    #[arg(long, global = true, default_value = "", allow_hyphen_values = true)]
    pub delta_p: String,

    /// Line degree α_i given by its 1-based index.
    #[arg(long, global = true)]
    pub alpha: Option<usize>,

    /// Class expression such as `O[2,1]`, `O[s2.s1]` or `2*O[1] - O[]`.
    #[arg(long = "insert", global = true)]
    pub inserts: Vec<String>,

    /// Truncation order N in the t-variables.
    #[arg(long, global = true)]
    pub order: Option<u32>,

    /// Print Laurent coefficients instead of their non-equivariant values.
    #[arg(long, global = true)]
    pub equivariant: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Directory for cached Schubert restriction tables.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Basis, dimension and line degrees of G/P.
    Describe,
    /// K-theoretic invariant of degree 0, or of the line degree --alpha.
    Kgw,
    /// Number of lines meeting general translates of the inserted Schubert varieties.
    CountLines,
    /// The potential G0 up to order N.
    Potential,
    /// Big quantum K product of the two insertions up to order N.
    Product,
    /// Small quantum K product (t = 0) of the two insertions.
    SmallProduct,
    /// Run a self-check suite.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

/// Failure of a job: `code` is the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_internal() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn user_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
    }
}

pub struct Output {
    pub report: Report,
    pub code: i32,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.report.to_json()),
            Format::Text => self.report.to_text(),
        }
    }
}

impl Cli {
    pub fn space(&self) -> Result<Arc<FlagVariety>, Failure> {
        let t = self
            .cartan_type
            .as_deref()
            .ok_or_else(|| user_error("--type is required"))?
            .trim();
        let name = match (t.len(), self.rank) {
            (1, Some(r)) => format!("{t}{r}"),
            (1, None) => return Err(user_error("--rank is required with a bare family letter")),
            (_, Some(r)) if t.get(1..) != Some(r.to_string().as_str()) => {
                return Err(user_error(format!("--type {t} conflicts with --rank {r}")))
            }
            _ => t.to_string(),
        };
        let ct: CartanType = name.parse()?;
        Ok(FlagVariety::of_type(ct, &self.delta_p, Limits::default())?)
    }

    fn cache(&self) -> Option<Cache> {
        self.cache_dir.as_ref().map(Cache::new)
    }

    fn alpha(&self, space: &FlagVariety) -> Result<Option<usize>, Failure> {
        match self.alpha {
            None => Ok(None),
            Some(a) if a >= 1 && space.simple_degrees().contains(&(a - 1)) => Ok(Some(a - 1)),
            Some(a) => Err(user_error(format!(
                "α{a} is not a simple degree of {} (choose among {:?})",
                space.label(),
                space
                    .simple_degrees()
                    .iter()
                    .map(|i| i + 1)
                    .collect::<Vec<_>>()
            ))),
        }
    }

    fn classes(&self, space: &Arc<FlagVariety>) -> Result<Vec<KClass>, Failure> {
        Ok(self
            .inserts
            .iter()
            .map(|s| classes::parse_class(s, space))
            .collect::<flagqk::Result<_>>()?)
    }

    fn two_classes(&self, space: &Arc<FlagVariety>) -> Result<(KClass, KClass), Failure> {
        let mut c = self.classes(space)?;
        if c.len() != 2 {
            return Err(user_error(format!(
                "expected exactly two --insert, got {}",
                c.len()
            )));
        }
        let b = c.pop().expect("two classes");
        let a = c.pop().expect("two classes");
        Ok((a, b))
    }

    /// Loads or stores the tables a job on `space` will use.
    fn warm_cache(&self, space: &Arc<FlagVariety>, cohomology: bool) -> Result<(), Failure> {
        let Some(cache) = self.cache() else {
            return Ok(());
        };
        let mut spaces = vec![space.clone()];
        for a in space.simple_degrees() {
            if is_line_degree(space, a)? {
                let l = line_parabolic(space, a)?;
                spaces.push(l.m0.clone());
                spaces.push(l.m1.clone());
            }
        }
        for x in &spaces {
            cache.warm::<KTheory>(x)?;
            if cohomology {
                cache.warm::<Cohomology>(x)?;
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Output, Failure> {
        if let Command::Verify { suite } = &self.command {
            let checks = verify::run(*suite);
            let code = if checks.iter().all(|c| c.passed) {
                0
            } else {
                2
            };
            let mut report = Report::new("verify", None);
            report.checks = Some(checks);
            return Ok(Output { report, code });
        }
        let space = self.space()?;
        let alpha = self.alpha(&space)?;
        self.warm_cache(&space, matches!(self.command, Command::CountLines))?;
        let mut report = Report::new(command_name(&self.command), Some(&space));
        report.equivariant = self.equivariant;
        match &self.command {
            Command::Describe => report.description = Some(describe(&space)?),
            Command::Kgw => {
                let ins = self.classes(&space)?;
                let v = match alpha {
                    None => kgw_zero(&space, &ins)?,
                    Some(a) => kgw_line(&line_parabolic(&space, a)?, &ins)?,
                };
                report.value = Some(if self.equivariant {
                    v.render("y")
                } else {
                    flagqk::algebra::laurent::render_rational(&v.specialize_characters())
                });
            }
            Command::CountLines => {
                let a = match alpha {
                    Some(a) => a,
                    None => match space.simple_degrees().as_slice() {
                        [a] => *a,
                        _ => {
                            return Err(user_error(
                                "--alpha is required when G/P has several simple degrees",
                            ))
                        }
                    },
                };
                let line = line_parabolic(&space, a)?;
                let conditions = self
                    .inserts
                    .iter()
                    .map(|s| classes::parse_single(s, &space).map(|k| space.rep(k)))
                    .collect::<flagqk::Result<Vec<_>>>()?;
                report.value = Some(count_lines(&line, &conditions)?.to_string());
                report.equivariant = false;
            }
            Command::Potential => {
                let order = self.order.unwrap_or(DEFAULT_ORDER);
                let qk = self.ring(&space, order)?;
                report.order = Some(order);
                report.series = Some(report::series_terms(
                    &qk.potential()?,
                    &space,
                    self.equivariant,
                ));
            }
            Command::Product | Command::SmallProduct => {
                let order = match self.command {
                    Command::SmallProduct => 0,
                    _ => self.order.unwrap_or(DEFAULT_ORDER),
                };
                let (a, b) = self.two_classes(&space)?;
                let qk = self.ring(&space, order)?;
                report.order = Some(order);
                report.result = Some(report::element_terms(
                    &qk.product(&a, &b)?,
                    self.equivariant,
                ));
            }
            Command::Verify { .. } => unreachable!("handled above"),
        }
        Ok(Output { report, code: 0 })
    }

    /// The non-equivariant ring is the specialization of the equivariant one,
    /// so it is used whenever only specialized coefficients are printed.
    fn ring(&self, space: &Arc<FlagVariety>, order: u32) -> Result<QuantumK, Failure> {
        Ok(if self.equivariant {
            QuantumK::new(space, order)?
        } else {
            QuantumK::nonequivariant(space, order)?
        })
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Describe => "describe",
        Command::Kgw => "kgw",
        Command::CountLines => "count-lines",
        Command::Potential => "potential",
        Command::Product => "product",
        Command::SmallProduct => "small-product",
        Command::Verify { .. } => "verify",
    }
}

fn describe(space: &Arc<FlagVariety>) -> Result<Description, Failure> {
    let basis = (0..space.num_points())
        .map(|k| BasisInfo {
            basis: classes::basis_label(space, k),
            word: if k == 0 {
                "id".into()
            } else {
                space.rep_word(k)
            },
            length: space.rep_length(k),
        })
        .collect();
    let mut line_degrees = Vec::new();
    let mut other_degrees = Vec::new();
    for a in space.simple_degrees() {
        if is_line_degree(space, a)? {
            let l = line_parabolic(space, a)?;
            line_degrees.push(LineInfo {
                alpha: a + 1,
                delta_p_prime: l.delta_p_prime.indices().iter().map(|i| i + 1).collect(),
                m0: SpaceInfo::of(&l.m0),
                m1: SpaceInfo::of(&l.m1),
            });
        } else {
            other_degrees.push(a + 1);
        }
    }
    Ok(Description {
        basis,
        line_degrees,
        other_degrees,
    })
}
