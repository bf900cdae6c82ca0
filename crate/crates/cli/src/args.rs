use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "n6alg", version, about = "Build and verify N=6 3-algebras, their Lie superalgebras and isomorphism witnesses")]
pub struct Cli {
    /// Fundamental-identity sweep: every basis quintuple, or seeded random quintuples.
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive, global = true)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance for float comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the axiom suite on one family instance.
    Check(FamilyArgs),
    /// Center of a finite-dimensional instance, or a central-polynomial probe.
    Center(FamilyArgs),
    /// Simplicity of a finite-dimensional instance.
    Simple(FamilyArgs),
    /// Build Lie T with its conjugation and check the round trip.
    Tower(FamilyArgs),
    /// The 3-algebra of a graded Lie superalgebra with a graded conjugation.
    Tel(TelArgs),
    /// Hermitian congruence and symplectic factorizations.
    Factor(FactorArgs),
    /// Explicit isomorphisms between 3-algebras.
    Witness(WitnessArgs),
    /// Every corpus instance, one summary row each.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// a3t, a3t-ph, a3st, a3st-ph, a3n-plus, a3n-minus, c3, c3-ph, c3-h-alpha, p3, sw3, w3, w3beta, s3
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Size 2n of the C3 families.
    #[arg(long, default_value_t = 2)]
    pub two_n: usize,
    /// `+` or `-`.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub sign: String,
    /// Matrix literal `a,b;c,d`.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Scalar literal such as `3/5+4/5i`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// `id`, `standard` (P3 only) or a matrix literal.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// The 2x2 matrix of SW3.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// SW3 parameter: `0`, `pi`, `<k>pi` (kπi) or a decimal s (s·i).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Samples for sampled mode and for the polynomial families.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Maximal degree of sampled polynomials.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuperAlgebra {
    Psl,
    Osp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConjKind {
    Sigma1,
    Psl,
    Tau,
    OspHermitian,
    OspAntihermitian,
}

#[derive(Args, Debug)]
pub struct TelArgs {
    #[arg(long, value_enum)]
    pub algebra: SuperAlgebra,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Second size of psl(m,n), or n of osp(2,2n).
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub conj: ConjKind,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub sign: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FactorKind {
    Congruence,
    SymplecticHermitian,
    SymplecticAntihermitian,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    #[arg(long, value_enum)]
    pub kind: FactorKind,
    /// Matrix literal `a,b;c,d`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    /// `b* = A b̄ᵗ B^{-1}` against A3(m,n;t)_ph,C(p,q).
    A3Star,
    /// `ψ_A(u) = A ū Ā` against A3(n)_+.
    A3n,
    /// C3(2n, H; α) against its normal form.
    C3,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub kind: WitnessKind,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Inject a deliberate bug: `psi-sign`.
    #[arg(long)]
    pub fault: Option<String>,
    /// Skip building Lie T for each instance.
    #[arg(long)]
    pub no_towers: bool,
    /// Skip the polynomial families.
    #[arg(long)]
    pub finite_only: bool,
    /// Print the summary table to stderr.
    #[arg(long)]
    pub table: bool,
}
