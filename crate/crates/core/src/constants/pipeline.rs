use super::*;
use crate::real::{Ext, Precision};
use crate::report::{Cell, Meta, Report};

/// One named constant with its value at working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEntry {
    pub name: String,
    pub value: f64,
    pub decimal: String,
    pub note: String,
}

/// Inputs of the constants pipeline; defaults are the headline choices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsRequest {
    pub params: DParams<f64>,
    /// (r, v) pairs for extra C(η, δ, r, v) rows.
    pub c_entries: Vec<(f64, f64)>,
    pub q: f64,
    /// Window length τ = (t₂ − t₁) log q for the density coefficients.
    pub tau: Option<f64>,
    pub precision: Precision,
}

impl Default for ConstantsRequest {
    fn default() -> Self {
        ConstantsRequest { params: DParams::headline(), c_entries: Vec::new(), q: 1e9, tau: None, precision: Precision::Double }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub params: DParams<f64>,
    pub delta_star: f64,
    pub q: f64,
    pub precision: Precision,
    pub entries: Vec<ConstantEntry>,
}

impl ConstantsReport {
    pub fn get(&self, name: &str) -> Option<&ConstantEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|e| e.value)
    }

    pub fn to_report(&self) -> Report {
        let mut meta = Meta::new("constants");
        meta.precision = self.precision.to_string();
        let p = &self.params;
        meta.parameters = vec![
            ("eta".into(), p.eta.into()),
            ("delta".into(), p.delta.into()),
            ("kappa".into(), p.kappa.into()),
            ("k".into(), p.k.into()),
            ("eps".into(), p.eps.into()),
            ("delta_star".into(), self.delta_star.into()),
            ("q".into(), self.q.into()),
        ];
        meta.summary = ["c0_bound", "sqrt_d"]
            .iter()
            .filter_map(|n| self.value(n).map(|v| ((*n).to_owned(), Cell::from(v))))
            .collect();
        meta.notes.push("the (5/4 − ε)/(δκ) factor of D carries no vanishing correction term".into());
        let columns = ["name", "value", "decimal", "note"].map(String::from).to_vec();
        let mut report = Report::new(meta, columns);
        for e in &self.entries {
            let row = vec![e.name.as_str().into(), e.value.into(), e.decimal.as_str().into(), e.note.as_str().into()];
            report.push(row).expect("four columns");
        }
        report
    }
}

struct Builder(Vec<ConstantEntry>);

impl Builder {
    fn real<R: Real>(&mut self, name: &str, v: &R, note: &str) {
        self.0.push(ConstantEntry { name: name.into(), value: v.to_f64(), decimal: v.render(), note: note.into() });
    }

    fn double(&mut self, name: &str, v: f64, note: &str) {
        self.real(name, &v, note);
    }
}

fn lift<R: Real>(like: &R, v: f64) -> R {
    // Decimal parameters such as 1.156 enter at working precision, not as a rounded double.
    like.dec(&crate::report::format_float(v))
}

/// Evaluates every constant for the request at its precision.
pub fn constants_report(req: &ConstantsRequest) -> Result<ConstantsReport> {
    match req.precision {
        Precision::Double => constants_report_in(req, &0.0f64),
        Precision::Extended(bits) => constants_report_in(req, &Ext::new(0.0, bits)),
    }
}

fn constants_report_in<R: Real>(req: &ConstantsRequest, like: &R) -> Result<ConstantsReport> {
    let p = &req.params;
    require(req.q >= 3.0, "q ≥ 3")?;
    let params = DParams {
        eta: lift(like, p.eta),
        delta: lift(like, p.delta),
        kappa: lift(like, p.kappa),
        k: p.k,
        eps: lift(like, p.eps),
    };
    params.validate()?;
    let k = p.k as f64;
    let mut b = Builder(Vec::new());

    let et = eta_constants(&params.eta)?;
    b.real("A", &et.a, "closed form in η");
    b.real("B1", &et.b1, "closed form in η");
    b.real("B2", &et.b2, "closed form in η");
    b.real("mollifier_mean", &mollifier_mean_constant(like), "closed form; stated bound 6.20");

    let c_hi = big_c(&params.eta, &params.delta, &like.lit(4.0 * k), &like.lit(4.0 * k))?;
    let c_lo = big_c(&params.eta, &params.delta, &like.lit(0.0), &like.lit(2.0 * k))?;
    b.real(&format!("C(eta,delta,{},{})", 4 * p.k, 4 * p.k), &c_hi, "moment constant, r = v = 4k");
    b.real(&format!("C(eta,delta,0,{})", 2 * p.k), &c_lo, "moment constant, r = 0, v = 2k");
    for &(r, v) in &req.c_entries {
        let c = big_c(&params.eta, &params.delta, &lift(like, r), &lift(like, v))?;
        b.real(&format!("C(eta,delta,{},{})", crate::report::format_float(r), crate::report::format_float(v)), &c, "moment constant, requested");
    }
    b.real("f(eta,kappa,delta)", &f_eta_kappa_delta(&params.eta, &params.kappa, &params.delta), "2κ times the density prefactor");

    let (h, delta_star) = h_of_k(p.k, like)?;
    b.real("h(k)", &h, "minimized over Δ ∈ [1e-6, 50], grid then golden section");
    b.real("Delta*", &delta_star, "argmin of h(k)");
    b.real("f_x_integral", &f_x_integral_constant(like), "exact rational 29136/3360; stated bound 8.68");
    b.double("f_x_integral_quadrature", f_x_integral_quadrature(), "piecewise quadrature of the tapered integral");
    let tail = prime_zeta_tail_constant();
    b.double("prime_zeta_tail", tail.total, "ℓ ≤ 500 with rigorous ζ_P upper bounds plus 1/499 + 1/500; stated bound 0.53");
    b.double("prime_zeta_leading", tail.leading_term, "ζ_P(3/2)/3");
    b.real("a6", &a6_constant(like), "log 3 − (3/4) log 2; stated bound 0.58");

    let d = big_d_with_h(&params, &h)?;
    let sqrt_d = d.sqrt();
    b.real("D", &d, "bracket to the 2k-th power over π^{2k}");
    b.real("sqrt_d", &sqrt_d, "√D");
    let q = lift(like, req.q);
    let q_term = like.lit(2.0) / like.pi() * q.powf(&(like.lit(3.0) / like.lit(88.0) - like.lit(1.0)));
    b.real("c0_bound", &(q_term.clone() + sqrt_d), "(2/π) q^{3/88−1} + √D; headline constant 982");
    b.real("c0_q_term", &q_term, "(2/π) q^{3/88−1}");

    let ratio = window_ratio();
    b.double("window_ratio", ratio.x, "argmin over u = 2a/τ of (1+u)/sin(πu/(2(1+u)))");
    b.double("density_leading", leading_density_coefficient(HEADLINE_WINDOW_RATIO), "leading zero-density coefficient over κ");
    let kappa = p.kappa;
    let tau = req.tau.unwrap_or(10.0 / kappa);
    let dc = zero_density_coefficients(kappa, tau)?;
    b.double("density_full", dc.full, &format!("full density coefficient at τ = {}", crate::report::format_float(tau)));
    b.double("density_simplified", dc.simplified, "4.79κ + 4.12/(2τ − 1.73/κ)");
    b.double("density_a", dc.a, "a = 0.82579τ/2");
    b.double("density_b", dc.b, "b = 1/(2κ)");

    Ok(ConstantsReport {
        params: p.clone(),
        delta_star: delta_star.to_f64(),
        q: req.q,
        precision: req.precision,
        entries: b.0,
    })
}

/// Optimizer result as a one-row report.
pub fn optimize_report(k: u32, eps: f64) -> Result<Report> {
    let opt = optimize_d_parameters(k, eps)?;
    let reference = DParams { k, eps, ..DParams::headline() };
    let reference_value = big_d(&reference).map(f64::sqrt).ok();
    let mut meta = Meta::new("optimize-d");
    meta.parameters = vec![("k".into(), k.into()), ("eps".into(), eps.into()), ("kappa".into(), HEADLINE_KAPPA.into())];
    meta.notes.push("grid over η ∈ [1, 3] and δ ∈ (0, 2/(8k+3)) then local refinement".into());
    let columns = ["eta", "delta", "sqrt_d", "reference_sqrt_d", "evaluations"].map(String::from).to_vec();
    let mut r = Report::new(meta, columns);
    r.push(vec![opt.eta.into(), opt.delta.into(), opt.value.into(), reference_value.into(), opt.evaluations.into()])?;
    Ok(r)
}

/// Zero-density coefficients and the resulting count bound for one window.
pub fn density_bound_report(kappa: f64, tau: f64, q: Option<f64>, sigma: Option<f64>) -> Result<Report> {
    let dc = zero_density_coefficients(kappa, tau)?;
    let mut meta = Meta::new("density-bound");
    meta.parameters = vec![
        ("kappa".into(), kappa.into()),
        ("tau".into(), tau.into()),
        ("q".into(), q.into()),
        ("sigma".into(), sigma.into()),
    ];
    let bound = match (q, sigma) {
        (Some(q), Some(s)) => {
            require(s >= 0.5, "σ ≥ 1/2")?;
            Some(dc.simplified * q.powf(1.0 - 2.0 * kappa * (s - 0.5)) * tau)
        }
        _ => None,
    };
    let columns = ["full", "simplified", "a", "b", "leading", "bound"].map(String::from).to_vec();
    let mut r = Report::new(meta, columns);
    let leading = leading_density_coefficient(HEADLINE_WINDOW_RATIO) * kappa;
    r.push(vec![dc.full.into(), dc.simplified.into(), dc.a.into(), dc.b.into(), leading.into(), bound.into()])?;
    Ok(r)
}
