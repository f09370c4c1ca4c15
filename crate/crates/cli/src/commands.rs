//! One handler per subcommand. Each turns its arguments into a [`Report`].

use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, ValueEnum};
use qcalc_core::evaluator::{Bump, Evaluator};
use qcalc_core::qcore::{q_bracket, q_bracket_classical_gap, q_factorial};
use qcalc_core::qderiv::{jackson_derivative, q_commutator_xp};
use qcalc_core::qfock::{algebra_residuals, build_truncated, build_with_ladder, eigen_gaps};
use qcalc_core::qint::{
    grid, lattice_points, monotonicity_counterexample, Bounds, LatticeSign, RuleRegistry,
};
use qcalc_core::qsolve::{atom_weight, recover_integrand, uniqueness_check};
use qcalc_core::qspecial::{ode_residual, q_exp, QSeries, QSeriesKind};
use qcalc_core::registry::FunctionRegistry;
use qcalc_core::{DeformationParameter, SummationControl};

use crate::output::{Cell, Report};
use crate::{Cli, Command, Common, Failure};

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, msg))
}

impl Common {
    fn dp(&self) -> Result<DeformationParameter, Failure> {
        let q = self
            .q
            .ok_or_else(|| usage(ErrorKind::MissingRequiredArgument, "--q is required"))?;
        Ok(DeformationParameter::new(q)?)
    }

    fn ctrl(&self) -> Result<SummationControl, Failure> {
        Ok(SummationControl::new(
            self.tol,
            self.max_terms,
            self.magnitude_bound,
            self.on_divergence.into(),
        )?)
    }

    fn base(&self, columns: &[&'static str], dp: &DeformationParameter) -> Report {
        Report::new(columns)
            .param("q", dp.q())
            .param("tol", self.tol)
            .param("max_terms", self.max_terms)
            .param("magnitude_bound", self.magnitude_bound)
    }
}

pub fn dispatch(common: &Common, command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Qnum(a) => qnum(common, a),
        Command::Deriv(a) => deriv(common, a),
        Command::Integrate(a) => integrate(common, a),
        Command::Lattice(a) => lattice(common, a),
        Command::Fock(a) => fock(common, a),
        Command::Special(a) => special(common, a),
        Command::Solve(a) => solve(common, a),
        Command::Counterexample(a) => counterexample(common, a),
        Command::LimitStudy(a) => limit_study(common, a),
    }
}

fn parse_fn(
    spec: &str,
    dp: &DeformationParameter,
    ctrl: &SummationControl,
) -> Result<Box<dyn Evaluator>, Failure> {
    Ok(FunctionRegistry::with_builtins().parse(spec, dp, ctrl)?)
}

#[derive(Debug, Args)]
pub struct QnumArgs {
    /// Single index.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["n_lo", "n_hi"], required_unless_present = "n_hi")]
    pub n: Option<i64>,

    #[arg(
        long,
        allow_negative_numbers = true,
        default_value_t = 0,
        requires = "n_hi"
    )]
    pub n_lo: i64,

    #[arg(long, allow_negative_numbers = true)]
    pub n_hi: Option<i64>,
}

fn qnum(common: &Common, a: &QnumArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let (lo, hi) = match (a.n, a.n_hi) {
        (Some(n), _) => (n, n),
        (None, Some(hi)) => (a.n_lo, hi),
        (None, None) => unreachable!("clap requires --n or --n-hi"),
    };
    if lo > hi {
        return Err(usage(
            ErrorKind::ValueValidation,
            format!("empty range {lo}..={hi}"),
        ));
    }
    let mut r = Report::new(&["n", "bracket", "factorial", "classical_gap"]).param("q", dp.q());
    for n in lo..=hi {
        r.push(vec![
            n.into(),
            q_bracket(n, &dp)?.into(),
            q_factorial(n, &dp)?.into(),
            q_bracket_classical_gap(n, &dp)?.into(),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    /// Function: poly:c0,c1,... or named:<name>[:arg].
    #[arg(long = "fn")]
    pub function: String,

    /// Comma-separated evaluation points (nonzero).
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    pub x: Vec<f64>,
}

fn deriv(common: &Common, a: &DerivArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let ctrl = common.ctrl()?;
    let f = parse_fn(&a.function, &dp, &ctrl)?;
    let mut r = common
        .base(&["x", "f", "derivative"], &dp)
        .param("fn", a.function.as_str());
    for &x in &a.x {
        let d = jackson_derivative(f.as_ref(), &dp, x)?;
        r.push(vec![x.into(), f.eval(x).into(), d.into()]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// Integral form: finite, interval, improper or real-line.
    #[arg(long, default_value = "finite")]
    pub form: String,

    /// Lower limit (interval form).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Upper limit (finite and interval forms).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,

    #[arg(long = "fn")]
    pub function: String,
}

fn integrate(common: &Common, a: &IntegrateArgs) -> Result<Report, Failure> {
    let rules = RuleRegistry::with_builtins();
    let rule = rules.get(&a.form).ok_or_else(|| {
        usage(
            ErrorKind::InvalidValue,
            format!(
                "unknown integral form '{}' (expected one of: {})",
                a.form,
                rules.names().collect::<Vec<_>>().join(", ")
            ),
        )
    })?;
    let dp = common.dp()?;
    let ctrl = common.ctrl()?;
    let f = parse_fn(&a.function, &dp, &ctrl)?;
    let bounds = Bounds {
        lower: a.a,
        upper: a.b,
    };
    let res = rule.integrate(f.as_ref(), &dp, &bounds, &ctrl)?;
    let mut r = common
        .base(&["value", "terms_used", "tail_estimate", "converged"], &dp)
        .param("form", rule.name())
        .param("fn", a.function.as_str());
    if let Some(lo) = a.a {
        r = r.param("a", lo);
    }
    if let Some(hi) = a.b {
        r = r.param("b", hi);
    }
    r.push(vec![
        res.value.into(),
        res.terms_used.into(),
        res.tail_estimate.into(),
        res.converged.into(),
    ]);
    for flag in &res.flags {
        r.flag(flag.to_string());
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SignArg {
    Positive,
    Negative,
    Both,
}

impl From<SignArg> for LatticeSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Positive => LatticeSign::Positive,
            SignArg::Negative => LatticeSign::Negative,
            SignArg::Both => LatticeSign::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub scale: f64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    pub n_lo: i64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 10)]
    pub n_hi: i64,

    #[arg(long, value_enum, default_value_t = SignArg::Positive)]
    pub sign: SignArg,

    #[arg(long = "fn", default_value = "named:const:1")]
    pub function: String,
}

fn lattice(common: &Common, a: &LatticeArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let ctrl = common.ctrl()?;
    let f = parse_fn(&a.function, &dp, &ctrl)?;
    let lat = lattice_points(&dp, a.scale, a.n_lo, a.n_hi, a.sign.into())?;
    let mut r = Report::new(&["n", "sign", "location", "weight", "f_value", "term"])
        .param("q", dp.q())
        .param("scale", a.scale)
        .param("fn", a.function.as_str());
    for (p, row) in lat.points().iter().zip(lat.table(f.as_ref())) {
        r.push(vec![
            row.n.into(),
            i64::from(p.sign).into(),
            row.location.into(),
            row.weight.into(),
            row.f_value.into(),
            row.term.into(),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FockTable {
    /// Nonzero entries of a, a†, N and x̂D.
    Matrices,
    /// Residuals of the three defining relations.
    Residuals,
    /// N versus x̂D on the diagonal.
    Eigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ladder {
    /// √([n]_q)
    Q,
    /// √n, the undeformed ladder
    Classical,
}

#[derive(Debug, Args)]
pub struct FockArgs {
    #[arg(long, default_value_t = 10)]
    pub dim: usize,

    #[arg(long, value_enum, default_value_t = FockTable::Residuals)]
    pub table: FockTable,

    #[arg(long, value_enum, default_value_t = Ladder::Q)]
    pub ladder: Ladder,
}

fn fock(common: &Common, a: &FockArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let ops = match a.ladder {
        Ladder::Q => build_truncated(&dp, a.dim)?,
        Ladder::Classical => build_with_ladder(&dp, a.dim, |n| f64::from(n).sqrt())?,
    };
    let ladder = match a.ladder {
        Ladder::Q => "q",
        Ladder::Classical => "classical",
    };
    let head = |cols: &[&'static str]| {
        Report::new(cols)
            .param("q", dp.q())
            .param("dim", a.dim)
            .param("ladder", ladder)
    };
    let r = match a.table {
        FockTable::Matrices => {
            let mut r = head(&["operator", "row", "col", "value"]);
            let named = [
                ("a", &ops.lowering),
                ("a_dagger", &ops.raising),
                ("N", &ops.number),
                ("q_number", &ops.q_number),
            ];
            for (name, m) in named {
                for i in 0..a.dim {
                    for j in 0..a.dim {
                        if m[(i, j)] != 0.0 {
                            r.push(vec![name.into(), i.into(), j.into(), m[(i, j)].into()]);
                        }
                    }
                }
            }
            r
        }
        FockTable::Residuals => {
            let res = algebra_residuals(&ops);
            let mut r = head(&["relation", "residual"]);
            r.push(vec![
                "a a_dagger - q a_dagger a - q^-N".into(),
                res.r1.into(),
            ]);
            r.push(vec!["[N, a_dagger] - a_dagger".into(), res.r2.into()]);
            r.push(vec!["[N, a] + a".into(), res.r3.into()]);
            r
        }
        FockTable::Eigen => {
            let mut r = head(&["n", "number", "q_number", "gap"]);
            for g in eigen_gaps(&ops) {
                r.push(vec![
                    g.n.into(),
                    g.number.into(),
                    g.q_number.into(),
                    g.gap.into(),
                ]);
            }
            r
        }
    };
    Ok(r)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Qexp,
    Qsin,
    Qcos,
}

impl From<KindArg> for QSeriesKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Qexp => QSeriesKind::Exp,
            KindArg::Qsin => QSeriesKind::Sin,
            KindArg::Qcos => QSeriesKind::Cos,
        }
    }
}

#[derive(Debug, Args)]
pub struct SpecialArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,

    /// Comma-separated evaluation points (nonzero, for the residual).
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    pub x: Vec<f64>,

    /// Coefficient in D²f + a·f; defaults to 1, or −1 for qexp.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
}

fn special(common: &Common, a: &SpecialArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let ctrl = common.ctrl()?;
    let kind: QSeriesKind = a.kind.into();
    let coeff = a.a.unwrap_or(match kind {
        QSeriesKind::Exp => -1.0,
        _ => 1.0,
    });
    let series = QSeries::new(kind, dp, ctrl);
    let mut r = common
        .base(&["x", "value", "residual"], &dp)
        .param("kind", kind.name())
        .param("a", coeff);
    for &x in &a.x {
        r.push(vec![
            x.into(),
            series.eval_checked(x)?.into(),
            ode_residual(kind, coeff, &dp, x, &ctrl)?.into(),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    /// h = D F on the lattice below b.
    Recover,
    /// Integral change under off- and on-lattice perturbations of f.
    Uniqueness,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = SolveMode::Recover)]
    pub mode: SolveMode,

    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub b: f64,

    #[arg(long, default_value_t = 20)]
    pub depth: usize,

    /// F for recover, f for uniqueness.
    #[arg(long = "fn")]
    pub function: String,

    /// Size of the on-lattice perturbation.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-3)]
    pub epsilon: f64,

    /// Lattice index of the on-lattice perturbation.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

fn solve(common: &Common, a: &SolveArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    let ctrl = common.ctrl()?;
    let f = parse_fn(&a.function, &dp, &ctrl)?;
    match a.mode {
        SolveMode::Recover => {
            let sol = recover_integrand(f.as_ref(), &dp, a.b, a.depth)?;
            let mut r = common
                .base(&["n", "point", "h_value"], &dp)
                .param("mode", "recover")
                .param("fn", a.function.as_str())
                .param("b", a.b)
                .param("F_b", f.eval(a.b))
                .param("reintegrated", sol.reintegrate(&dp));
            for (n, v) in sol.values.iter().enumerate() {
                r.push(vec![n.into(), v.point.into(), v.h_value.into()]);
            }
            Ok(r)
        }
        SolveMode::Uniqueness => {
            let q = dp.q();
            let p = dp.odd_power(a.index as i64) * a.b;
            let f: Arc<dyn Evaluator> = Arc::from(f);
            let shared = || {
                let f = Arc::clone(&f);
                move |x: f64| f.eval(x)
            };
            // strictly between q³·b and q·b, away from both
            let mid = q * q * a.b;
            let off = Bump::new(
                shared(),
                mid * (1.0 - 0.1 * (1.0 - q)),
                mid * (1.0 + 0.1 * (1.0 - q)),
                1.0,
            );
            // a neighbourhood of p that contains no other lattice point
            let radius = 0.5 * p * (1.0 - q * q);
            let on = Bump::new(shared(), p - radius, p + radius, a.epsilon);
            let mut r = common
                .base(
                    &[
                        "perturbation",
                        "same_class",
                        "integral_gap",
                        "predicted_gap",
                    ],
                    &dp,
                )
                .param("mode", "uniqueness")
                .param("fn", a.function.as_str())
                .param("b", a.b)
                .param("epsilon", a.epsilon)
                .param("index", a.index);
            let reference = shared();
            let off_rep = uniqueness_check(&reference, &off, &dp, a.b, a.depth, 0.0, &ctrl)?;
            r.push(vec![
                "off-lattice".into(),
                off_rep.same_class.into(),
                off_rep.integral_gap.into(),
                0.0.into(),
            ]);
            let on_rep = uniqueness_check(&reference, &on, &dp, a.b, a.depth, 0.0, &ctrl)?;
            let predicted = atom_weight(&dp, a.b, a.index) * a.epsilon.abs();
            r.push(vec![
                "on-lattice".into(),
                on_rep.same_class.into(),
                on_rep.integral_gap.into(),
                predicted.into(),
            ]);
            Ok(r)
        }
    }
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.8)]
    pub a: f64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub b: f64,

    /// Number of sample points.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,

    /// Left end of the sampling window; defaults to 0 so the plateau shows.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub from: f64,
}

fn counterexample(common: &Common, a: &CounterexampleArgs) -> Result<Report, Failure> {
    let dp = common.dp()?;
    if a.grid < 2 {
        return Err(usage(
            ErrorKind::ValueValidation,
            "--grid must be at least 2",
        ));
    }
    let c = monotonicity_counterexample(&dp, a.a, a.b)?;
    let mut r = Report::new(&["x", "f", "g", "int_f", "int_g"])
        .param("q", dp.q())
        .param("a", c.a)
        .param("b", c.b)
        .param("int_f", c.int_f)
        .param("int_g", c.int_g)
        .param("min_f_minus_g_on_ab", c.min_gap_on_interval(a.grid))
        .param("plateau_lo", c.plateau.lo)
        .param("plateau_hi", c.plateau.hi)
        .param("plateau_height", c.plateau.value);
    for x in grid(a.from, a.b, a.grid) {
        r.push(vec![
            x.into(),
            c.f.eval(x).into(),
            c.g.eval(x).into(),
            c.int_f.into(),
            c.int_g.into(),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct LimitStudyArgs {
    /// q values to sweep.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [0.9, 0.99, 0.999])]
    pub qs: Vec<f64>,

    /// Point for the sin → cos derivative comparison.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub x: f64,

    /// Index for the bracket and commutator comparisons.
    #[arg(long, default_value_t = 5)]
    pub n: u32,
}

fn limit_study(common: &Common, a: &LimitStudyArgs) -> Result<Report, Failure> {
    let ctrl = common.ctrl()?;
    let mut r = Report::new(&[
        "q",
        "derivative_dev",
        "qexp_dev",
        "bracket_dev",
        "commutator_ratio",
        "commutator_dev",
    ])
    .param("x", a.x)
    .param("n", a.n)
    .param("tol", common.tol);
    let sin = |t: f64| t.sin();
    for &q in &a.qs {
        let dp = DeformationParameter::new(q)?;
        let c = q_commutator_xp(a.n, &dp);
        r.push(vec![
            Cell::Num(q),
            (jackson_derivative(&sin, &dp, a.x)? - a.x.cos())
                .abs()
                .into(),
            (q_exp(1.0, &dp, &ctrl)? - std::f64::consts::E).abs().into(),
            q_bracket_classical_gap(a.n.into(), &dp)?.into(),
            c.ratio.into(),
            c.deviation.into(),
        ]);
    }
    Ok(r)
}
