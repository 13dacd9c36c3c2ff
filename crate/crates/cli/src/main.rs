use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dn_core::algebra::{self, state_images};
use dn_core::outer::{self, WreathCoordinates};
use dn_core::vgroup::{self, PiecewiseSource, StateMap, StateSource};
use dn_core::{dot, format, Budget, CoreTransducer, Error, FiniteTransducer, LazyTransducer, MultiWord, PrefixExchange};

#[derive(Parser)]
#[command(name = "dn", version, about = "Transducers over products of Cantor spaces")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Cap on explored states or configurations.
    #[arg(long, global = true, default_value_t = Budget::default().states)]
    budget: usize,
    /// Depth limit for image iteration and lazy exploration.
    #[arg(long, global = true, default_value_t = Budget::default().depth)]
    depth: usize,
    /// Largest synchronizing level tried.
    #[arg(long, global = true, default_value_t = Budget::default().kmax)]
    kmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a transducer or exchange file.
    Validate { file: PathBuf },
    /// Read a finite word from a state (the initial one by default).
    Read {
        file: PathBuf,
        word: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Minimal transducer.
    Minimize { file: PathBuf },
    /// `a` then `b`.
    Compose { a: PathBuf, b: PathBuf },
    /// Product of one-dimensional transducers, the first in coordinate 0.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Least synchronizing level.
    Sync { file: PathBuf },
    /// Canonical core.
    Core { file: PathBuf },
    /// Image of each state as disjoint cones.
    Image {
        file: PathBuf,
        #[arg(long)]
        state: Option<String>,
    },
    /// The coordinate permutation of a core.
    Psi { file: PathBuf },
    /// One-dimensional factors of a core with trivial psi.
    Decompose { file: PathBuf },
    /// Signature of a one-dimensional core.
    Sig { file: PathBuf },
    /// Product of the signatures of one-dimensional cores.
    Sigd {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Whether a tuple of one-dimensional cores has trivial signature.
    Kernel {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build a homeomorphism whose core is the product of the given cores.
    Realize {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Inverse of a core.
    Invert { file: PathBuf },
    /// Check each clause of the characterization of homeomorphism cores.
    Member { file: PathBuf },
    /// Product of two cores, `a` then `b`.
    Mult { a: PathBuf, b: PathBuf },
    /// Wreath coordinates of a core; `--compose` multiplies two of them.
    Wreath {
        file: PathBuf,
        #[arg(long)]
        compose: Option<PathBuf>,
    },
    /// Apply a prefix exchange to a finite word.
    PeEval { file: PathBuf, word: String },
    /// `a` then `b`, as prefix exchanges.
    PeCompose { a: PathBuf, b: PathBuf },
    /// Core found by lazy exploration of an exchange or a transducer state.
    LazyCore {
        file: PathBuf,
        #[arg(long)]
        state: Option<String>,
    },
    /// Diagonal presentation reading one grid letter at a time.
    Diag {
        file: PathBuf,
        #[arg(long)]
        state: Option<String>,
    },
    /// Count residuals of the interleaved map on words up to a length.
    Probe {
        file: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 10_000)]
        max_residuals: usize,
    },
    /// GraphViz export.
    Dot { file: PathBuf },
}

enum Loaded {
    Transducer(FiniteTransducer),
    Exchange(PrefixExchange),
    Wreath(WreathCoordinates),
}

struct Ctx {
    budget: Budget,
    format: OutFormat,
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out = std::result::Result<String, Failure>;

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, kmax: usize) -> std::result::Result<Loaded, Failure> {
    let text = read_file(path)?;
    let header = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    let with_path = |e: Error| Failure::Domain(format!("{}: {e}", path.display()));
    match header {
        Some("exchange v1") => format::parse_exchange(&text).map(Loaded::Exchange).map_err(with_path),
        Some("wreath v1") => format::parse_wreath(&text, kmax).map(Loaded::Wreath).map_err(with_path),
        _ => format::parse_transducer(&text).map(Loaded::Transducer).map_err(with_path),
    }
}

impl Ctx {
    fn transducer(&self, path: &Path) -> std::result::Result<FiniteTransducer, Failure> {
        match load(path, self.budget.kmax)? {
            Loaded::Transducer(t) => Ok(t),
            Loaded::Wreath(w) => Ok(w.to_core(self.budget)?.into_inner()),
            Loaded::Exchange(_) => Err(Failure::Usage(format!("{}: expected a transducer", path.display()))),
        }
    }

    fn core(&self, path: &Path) -> std::result::Result<CoreTransducer, Failure> {
        match load(path, self.budget.kmax)? {
            Loaded::Transducer(t) => Ok(algebra::core(&t, self.budget.kmax)?),
            Loaded::Wreath(w) => Ok(w.to_core(self.budget)?),
            Loaded::Exchange(f) => {
                let mut lazy = vgroup::to_lazy_transducer(&f, self.budget.states)?;
                Ok(vgroup::lazy_core(&mut lazy, self.budget)?)
            }
        }
    }

    fn cores(&self, paths: &[PathBuf]) -> std::result::Result<Vec<CoreTransducer>, Failure> {
        paths.iter().map(|p| self.core(p)).collect()
    }

    fn exchange(&self, path: &Path) -> std::result::Result<PrefixExchange, Failure> {
        match load(path, self.budget.kmax)? {
            Loaded::Exchange(f) => Ok(f),
            _ => Err(Failure::Usage(format!("{}: expected an exchange", path.display()))),
        }
    }

    fn emit(&self, t: &FiniteTransducer) -> String {
        match self.format {
            OutFormat::Text => format::write_transducer(t),
            OutFormat::Dot => dot::to_dot(t),
        }
    }

    fn text_only(&self) -> std::result::Result<(), Failure> {
        match self.format {
            OutFormat::Text => Ok(()),
            OutFormat::Dot => Err(Failure::Usage("--format dot applies only to transducer output".into())),
        }
    }
}

fn state_index(t: &FiniteTransducer, name: Option<&str>) -> std::result::Result<usize, Failure> {
    match name {
        Some(n) => Ok(t.index_of(n)?),
        None => Ok(t.initial().unwrap_or(0)),
    }
}

fn word(s: &str) -> std::result::Result<MultiWord, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("{s}: {e}")))
}

fn run(cmd: Cmd, ctx: &Ctx) -> Out {
    let b = ctx.budget;
    match cmd {
        Cmd::Validate { file } => {
            ctx.text_only()?;
            Ok(match load(&file, b.kmax)? {
                Loaded::Transducer(t) => format!("ok: {} states\n", t.state_count()),
                Loaded::Exchange(f) => format!("ok: {} pairs\n", f.pairs().len()),
                Loaded::Wreath(w) => format!("ok: {} factors\n", w.factors.len()),
            })
        }
        Cmd::Read { file, word: w, state } => {
            ctx.text_only()?;
            let t = ctx.transducer(&file)?;
            let q = state_index(&t, state.as_deref())?;
            let w = word(&w)?;
            w.check(t.domain())?;
            let (r, out) = t.read(q, &w)?;
            Ok(format!("{} {}\n", t.name(r), out))
        }
        Cmd::Minimize { file } => Ok(ctx.emit(&ctx.transducer(&file)?.minimize())),
        Cmd::Compose { a, b: bf } => Ok(ctx.emit(&algebra::compose(&ctx.transducer(&a)?, &ctx.transducer(&bf)?)?)),
        Cmd::Product { files } => {
            let ts = files.iter().map(|f| ctx.transducer(f)).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(ctx.emit(&algebra::product(&ts)?))
        }
        Cmd::Sync { file } => {
            ctx.text_only()?;
            Ok(format!("{}\n", algebra::sync_length(&ctx.transducer(&file)?, b.kmax)?))
        }
        Cmd::Core { file } => Ok(ctx.emit(ctx.core(&file)?.inner())),
        Cmd::Image { file, state } => {
            ctx.text_only()?;
            let t = ctx.transducer(&file)?;
            let images = state_images(&t, b.depth)?;
            let only = state.as_deref().map(|n| t.index_of(n)).transpose()?;
            let mut s = String::new();
            for (q, img) in images.iter().enumerate() {
                if only.is_some_and(|o| o != q) {
                    continue;
                }
                let cones: Vec<String> = img.cones().iter().map(MultiWord::to_string).collect();
                let _ = writeln!(s, "{}: {}", t.name(q), cones.join(" "));
            }
            Ok(s)
        }
        Cmd::Psi { file } => {
            ctx.text_only()?;
            Ok(format!("{}\n", outer::psi(&ctx.core(&file)?)?))
        }
        Cmd::Decompose { file } => {
            let factors = outer::decompose(&ctx.core(&file)?, b)?;
            Ok(factors.iter().map(|f| ctx.emit(f.inner())).collect())
        }
        Cmd::Sig { file } => {
            ctx.text_only()?;
            Ok(format!("{}\n", outer::sig(&ctx.core(&file)?, b)?))
        }
        Cmd::Sigd { files } => {
            ctx.text_only()?;
            Ok(format!("{}\n", outer::sig_d(&ctx.cores(&files)?, b)?))
        }
        Cmd::Kernel { files } => {
            ctx.text_only()?;
            Ok(format!("{}\n", outer::kernel_test(&ctx.cores(&files)?, b)?))
        }
        Cmd::Realize { files } => {
            let r = outer::realize_kernel_element(&ctx.cores(&files)?, b)?;
            if ctx.format == OutFormat::Dot {
                return Ok(dot::to_dot(r.recovered.inner()));
            }
            let mut s = String::new();
            let _ = writeln!(s, "state {}", r.state);
            let _ = writeln!(s, "depth {}", r.depth);
            for (a, c) in r.image.iter().zip(&r.code) {
                let _ = writeln!(s, "cone {a} -> {c}");
            }
            for (w, out, q) in &r.pieces {
                let _ = writeln!(s, "piece {w} -> {out} {q}");
            }
            s.push_str(&format::write_transducer(r.recovered.inner()));
            Ok(s)
        }
        Cmd::Invert { file } => Ok(ctx.emit(outer::invert_core(&ctx.core(&file)?, b)?.inner())),
        Cmd::Member { file } => {
            ctx.text_only()?;
            Ok(format!("{}\n", outer::o_membership(&ctx.transducer(&file)?, b)?))
        }
        Cmd::Mult { a, b: bf } => Ok(ctx.emit(outer::multiply_cores(&ctx.core(&a)?, &ctx.core(&bf)?, b)?.inner())),
        Cmd::Wreath { file, compose } => {
            ctx.text_only()?;
            let coords = |p: &Path| -> std::result::Result<WreathCoordinates, Failure> {
                match load(p, b.kmax)? {
                    Loaded::Wreath(w) => Ok(w),
                    _ => Ok(outer::wreath_coordinates(&ctx.core(p)?, b)?),
                }
            };
            let mut w = coords(&file)?;
            if let Some(other) = compose {
                w = w.compose(&coords(&other)?, b)?;
            }
            Ok(format::write_wreath(&w))
        }
        Cmd::PeEval { file, word: w } => {
            ctx.text_only()?;
            let f = ctx.exchange(&file)?;
            let w = word(&w)?;
            w.check(f.params())?;
            Ok(format!("{}\n", f.eval(&w)?))
        }
        Cmd::PeCompose { a, b: bf } => {
            ctx.text_only()?;
            Ok(format::write_exchange(&ctx.exchange(&a)?.compose(&ctx.exchange(&bf)?)?))
        }
        Cmd::LazyCore { file, state } => {
            let c = match load(&file, b.kmax)? {
                Loaded::Exchange(f) => {
                    let mut l = vgroup::to_lazy_transducer(&f, b.states)?;
                    vgroup::lazy_core(&mut l, b)?
                }
                Loaded::Transducer(t) => {
                    let q = state_index(&t, state.as_deref())?;
                    let mut l = LazyTransducer::new(StateSource::new(t, q)?, b.states)?;
                    vgroup::lazy_core(&mut l, b)?
                }
                Loaded::Wreath(_) => return Err(Failure::Usage("lazy-core takes a transducer or exchange".into())),
            };
            Ok(ctx.emit(c.inner()))
        }
        Cmd::Diag { file, state } => {
            let t = match load(&file, b.kmax)? {
                Loaded::Exchange(f) => {
                    let mut l: LazyTransducer<PiecewiseSource> = vgroup::to_lazy_transducer(&f, b.states)?;
                    vgroup::diagonal_restrict(&mut l, b.states)?
                }
                Loaded::Transducer(t) => {
                    let q = state_index(&t, state.as_deref())?;
                    let mut l = LazyTransducer::new(StateSource::new(t, q)?, b.states)?;
                    vgroup::diagonal_restrict(&mut l, b.states)?
                }
                Loaded::Wreath(_) => return Err(Failure::Usage("diag takes a transducer or exchange".into())),
            };
            Ok(ctx.emit(&t))
        }
        Cmd::Probe { file, state, max_len, max_residuals } => {
            ctx.text_only()?;
            let r = match load(&file, b.kmax)? {
                Loaded::Exchange(mut f) => vgroup::rationality_probe(&mut f, max_len, max_residuals)?,
                Loaded::Transducer(t) => {
                    let q = state_index(&t, state.as_deref())?;
                    let mut m = StateMap::new(t, q)?;
                    vgroup::rationality_probe(&mut m, max_len, max_residuals)?
                }
                Loaded::Wreath(w) => {
                    let t = w.to_core(b)?.into_inner();
                    let mut m = StateMap::new(t, 0)?;
                    vgroup::rationality_probe(&mut m, max_len, max_residuals)?
                }
            };
            Ok(format!(
                "residuals {}\nexplored {}\nprefix_len {}\nextension_len {}\n",
                r.residuals, r.explored, r.prefix_len, r.extension_len
            ))
        }
        Cmd::Dot { file } => Ok(dot::to_dot(&ctx.transducer(&file)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        budget: Budget { kmax: cli.opts.kmax, depth: cli.opts.depth, states: cli.opts.budget },
        format: cli.opts.format,
    };
    match run(cli.cmd, &ctx) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
