use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pentavec::bases::{lemma1_construct, lemma2_construct, orthonormality_residual, regularity_residual, wedge_residual};
use pentavec::format::{self, Document, Kind};
use pentavec::pentaspace::{FiveForm, FiveVector};
use pentavec::poincare::{self, build_r, transform_r, transform_t, ParamTensorT};
use pentavec::stress_energy::transform_m;
use pentavec::suite::{self, Suite, SuiteConfig};
use pentavec::{BasisFlag, MetricH, PoincareTransform, Scheme, Tolerance};

#[derive(Parser)]
#[command(name = "pentavec", version, about = "Five-vector geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Central2,
    Central4,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    #[value(name = "O")]
    O,
    #[value(name = "P")]
    P,
}

impl From<BasisArg> for BasisFlag {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::O => BasisFlag::O,
            BasisArg::P => BasisFlag::P,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Bases,
    Clifford,
    Connection,
    Poincare,
    Conservation,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lemma1,
    Lemma2,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Relative tolerance used by the algorithms.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Samples per axis on the coarse conservation grid.
        #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u64).range(5..=129))]
        grid: u64,
        #[arg(long, value_enum, default_value = "central2")]
        scheme: SchemeArg,
        /// Restrict basis-dependent checks to one basis.
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        #[arg(long, value_enum, default_value = "human")]
        format: FormatArg,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=64))]
        jobs: u64,
    },
    /// Apply a Poincaré transform file to a vector, form, parameter tensor or M field.
    Transform {
        input: PathBuf,
        transform: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Apply the inverse of the transform.
        #[arg(long)]
        inverse: bool,
        /// Override the basis declared in the input.
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        /// Override the kappa declared in the input.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Build a five-vector basis from a four-basis file.
    Basis {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn tolerance(rel: f64) -> Result<Tolerance, String> {
    Tolerance::new(rel, Tolerance::default().abs).map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Verify { suite, seed, tol, kappa, grid, scheme, basis, format, jobs } => {
            let cfg = SuiteConfig {
                seed,
                tol: tolerance(tol)?,
                kappa,
                grid: grid as usize,
                scheme: match scheme {
                    SchemeArg::Central2 => Scheme::Central2,
                    SchemeArg::Central4 => Scheme::Central4,
                },
                basis: basis.map(BasisFlag::from),
                jobs: jobs as usize,
            };
            let which = match suite {
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Bases => Suite::Bases,
                SuiteArg::Clifford => Suite::Clifford,
                SuiteArg::Connection => Suite::Connection,
                SuiteArg::Poincare => Suite::Poincare,
                SuiteArg::Conservation => Suite::Conservation,
                SuiteArg::All => Suite::All,
            };
            let report = suite::run(which, &cfg);
            match format {
                FormatArg::Human => print!("{}", report.render_human()),
                FormatArg::Machine => print!("{}", report.render_machine()),
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Transform { input, transform, output, inverse, basis, kappa } => {
            let mut doc = format::read_file(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let t = format::read_file(&transform)
                .and_then(|d| d.transform())
                .map_err(|e| format!("{}: {e}", transform.display()))?;
            let t = if inverse { t.invert() } else { t };
            if let Some(b) = basis {
                doc.basis = b.into();
            }
            if let Some(k) = kappa {
                doc.kappa = k;
            }
            let out = apply_transform(&doc, &t).map_err(|e| e.to_string())?;
            emit(&out, output.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis { input, mode, output, tol } => {
            let doc = format::read_file(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let e = doc.four_basis().map_err(|e| e.to_string())?;
            let h = MetricH::eta();
            let tol = tolerance(tol)?;
            let basis = match mode {
                Mode::Lemma1 => lemma1_construct(&e, &h, tol),
                Mode::Lemma2 => lemma2_construct(&e, &h, tol),
            }
            .map_err(|e| e.to_string())?;
            let flags = basis.flags();
            let out = Document::from_matrices(Kind::Basis, BasisFlag::Regular, doc.kappa, doc.grid, &[*basis.matrix()])
                .map_err(|e| e.to_string())?;
            let mut text = String::new();
            text.push_str(&format!(
                "# standard {} regular {} orthonormal {}\n",
                flags.standard, flags.regular, flags.orthonormal
            ));
            text.push_str(&format!(
                "# wedge_residual {:.3e} orthonormality_residual {:.3e} regularity_residual {:.3e}\n",
                wedge_residual(&basis, &e),
                orthonormality_residual(&basis, &h),
                regularity_residual(&basis, &h)
            ));
            text.push_str(&format::emit(&out));
            write_text(&text, output.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn apply_transform(doc: &Document, t: &PoincareTransform) -> pentavec::Result<Document> {
    let parallel = doc.basis.is_parallel();
    match doc.kind {
        Kind::FiveVector => {
            let out: Vec<_> = doc
                .vectors()?
                .into_iter()
                .map(|v| {
                    let v = FiveVector::new(v);
                    let r = if parallel {
                        poincare::transform_vector_p(&v, t, doc.kappa)
                    } else {
                        poincare::transform_vector_o(&v, t)
                    };
                    r.components
                })
                .collect();
            Document::from_vectors(doc.kind, doc.basis, doc.kappa, doc.grid, &out)
        }
        Kind::FiveForm => {
            let out: Vec<_> = doc
                .vectors()?
                .into_iter()
                .map(|w| {
                    let w = FiveForm::new(w);
                    let r = if parallel {
                        poincare::transform_form_p(&w, t, doc.kappa)
                    } else {
                        poincare::transform_form_o(&w, t)
                    };
                    r.components
                })
                .collect();
            Document::from_vectors(doc.kind, doc.basis, doc.kappa, doc.grid, &out)
        }
        Kind::TTensor => {
            let out = doc
                .matrices()?
                .iter()
                .map(|m| ParamTensorT::new(*m).map(|p| *transform_t(&p, t).matrix()))
                .collect::<pentavec::Result<Vec<_>>>()?;
            Document::from_matrices(doc.kind, doc.basis, doc.kappa, doc.grid, &out)
        }
        Kind::RTensor => {
            let out = doc
                .matrices()?
                .iter()
                .map(|m| {
                    let omega = m.fixed_view::<4, 4>(0, 0).into_owned();
                    let b = nalgebra_column(m);
                    build_r(&omega, &b).map(|r| *transform_r(&r, t).matrix())
                })
                .collect::<pentavec::Result<Vec<_>>>()?;
            Document::from_matrices(doc.kind, doc.basis, doc.kappa, doc.grid, &out)
        }
        Kind::MField => Ok(Document::from_m_field(&transform_m(&doc.m_field()?, t))),
        other => Err(pentavec::Error::KindMismatch {
            expected: "five-vector, five-form, t-tensor, r-tensor or m-field".into(),
            found: other.as_str().into(),
        }),
    }
}

fn nalgebra_column(m: &pentavec::Matrix5<f64>) -> pentavec::Vector4<f64> {
    pentavec::Vector4::new(m[(0, 4)], m[(1, 4)], m[(2, 4)], m[(3, 4)])
}

fn emit(doc: &Document, path: Option<&PathBuf>) -> Result<(), String> {
    write_text(&format::emit(doc), path)
}

fn write_text(text: &str, path: Option<&PathBuf>) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
