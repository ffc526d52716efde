use liesym::compare::{term_diff, term_diff_up_to_x_power};
use liesym::expr::{Atom, Expr, VarNames};
use liesym::jet::JetContext;
use liesym::lie::{prolong, symmetry_condition, Generator, LieError, SymmetryCondition};
use liesym::solver::{Analysis, Genericity};
use serde_json::{json, Value};

use crate::error::CliError;

/// JSON schema identifier.
pub const SCHEMA: &str = "lie-sym-report/1";

/// Comparison of one reference line against a computed determining equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceCheck {
    pub key: String,
    pub xdot_power: u32,
    pub up_to_x_power: bool,
    pub flags: Vec<String>,
}

/// Everything shown by `analyze`.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub source: String,
    pub bindings: Vec<(String, String)>,
    pub analysis: Analysis,
    pub prolongations: Vec<Expr>,
    pub condition: SymmetryCondition,
    pub references: Vec<ReferenceCheck>,
}

enum Item {
    Text(String),
    Math { text: String, latex: String },
}

struct Section {
    title: &'static str,
    items: Vec<Item>,
}

fn text(s: impl Into<String>) -> Item {
    Item::Text(s.into())
}

fn math(text: impl Into<String>, latex: impl Into<String>) -> Item {
    Item::Math {
        text: text.into(),
        latex: latex.into(),
    }
}

fn join(items: &[impl AsRef<str>]) -> String {
    if items.is_empty() {
        return "none".into();
    }
    items.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(", ")
}

fn xdot_label(p: u32, names: &VarNames) -> (String, String) {
    let dot = Expr::jet(1).to_latex_with(names);
    (
        format!("{}^{p}", Atom::Jet(1).display_with(names)),
        format!("{dot}^{{{p}}}"),
    )
}

fn genericity_item(g: &Genericity, stage: &str) -> Item {
    math(
        format!("{} != 0   [{stage}: {}]", g.divisor, g.origin),
        format!("{} &\\neq 0 && \\text{{{stage}}}", g.divisor.to_latex()),
    )
}

impl AnalysisReport {
    pub fn new(
        source: String,
        bindings: Vec<(String, String)>,
        analysis: Analysis,
        references: Vec<ReferenceCheck>,
    ) -> Result<Self, CliError> {
        let order = analysis.ode.order();
        let prolonged = prolong(&Generator::symbolic(), order, &JetContext::new(order).map_err(LieError::from)?)?;
        let prolongations = prolonged.prolongations().to_vec();
        let condition = symmetry_condition(&analysis.ode, &Generator::symbolic())?;
        Ok(AnalysisReport {
            source,
            bindings,
            analysis,
            prolongations,
            condition,
            references,
        })
    }

    /// Exit status implied by the findings.
    pub fn verification_passed(&self) -> bool {
        self.analysis.verification.passed() && self.analysis.basis.inconsistency.is_none()
    }

    fn genericity(&self) -> Vec<(&'static str, &Genericity)> {
        let a = &self.analysis;
        let mut out: Vec<(&'static str, &Genericity)> = Vec::new();
        let tagged = a
            .basis
            .genericity
            .iter()
            .map(|g| ("basis", g))
            .chain(a.trace.stage1.genericity.iter().map(|g| ("stage 1", g)))
            .chain(a.trace.stage2.genericity.iter().map(|g| ("stage 2", g)));
        for (stage, g) in tagged {
            if !out.iter().any(|(_, h)| h.divisor == g.divisor) {
                out.push((stage, g));
            }
        }
        out
    }

    fn sections(&self) -> Vec<Section> {
        let a = &self.analysis;
        let ode = &a.ode;
        let n = ode.names();
        let mut sections = Vec::new();

        let bindings: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        let params: Vec<&str> = ode.params().iter().map(|p| &**p).collect();
        sections.push(Section {
            title: "ODE",
            items: vec![
                text(format!("source: {}", self.source)),
                math(ode.display(), ode.to_latex().replacen(" = ", " &= ", 1)),
                text(format!("free parameters: {}", join(&params))),
                text(format!("bindings: {}", join(&bindings))),
                text(format!("side conditions: {}", join(&ode.side_conditions()))),
            ],
        });

        let g = Generator::symbolic();
        let mut items = vec![
            math(
                format!("xi = {}, eta = {}", g.xi().display_with(n), g.eta().display_with(n)),
                format!(
                    "\\xi &= {}, \\quad \\eta = {}",
                    g.xi().to_latex_with(n),
                    g.eta().to_latex_with(n)
                ),
            ),
        ];
        for (k, p) in self.prolongations.iter().enumerate() {
            items.push(math(
                format!("eta{} = {}", k + 1, p.display_with(n)),
                format!("\\eta^{{({})}} &= {}", k + 1, p.to_latex_with(n)),
            ));
        }
        sections.push(Section {
            title: "Prolongation",
            items,
        });

        let clearing = &self.condition.clearing;
        sections.push(Section {
            title: "Symmetry condition",
            items: vec![
                text(format!(
                    "multiplier: {} (applied after substituting the ODE)",
                    clearing.describe(n)
                )),
                math(
                    format!("{} = 0", self.condition.expr.display_with(n)),
                    format!("0 &= {}", self.condition.expr.to_latex_with(n)),
                ),
            ],
        });

        let items = a
            .det
            .equations
            .iter()
            .map(|e| {
                let (lt, ll) = xdot_label(e.xdot_power, n);
                math(
                    format!("[{lt}] {} = 0", e.expr.display_with(n)),
                    format!("{ll} &: \\quad {} = 0", e.expr.to_latex_with(n)),
                )
            })
            .collect();
        sections.push(Section {
            title: "Determining system",
            items,
        });

        let (xi, eta) = a.ansatz.display_with(n);
        let fns: Vec<String> = a
            .ansatz
            .functions()
            .into_iter()
            .map(|f| Atom::Fn(f).display_with(n))
            .collect();
        sections.push(Section {
            title: "Ansatz",
            items: vec![
                text(format!(
                    "polynomial of degree {} in {} with coefficient functions of {} of degree at most {}",
                    a.config.deg_x, n.dep, n.indep, a.config.deg_t
                )),
                math(
                    format!("xi = {xi}"),
                    format!("\\xi &= {}", a.ansatz.xi().to_latex_with(n)),
                ),
                math(
                    format!("eta = {eta}"),
                    format!("\\eta &= {}", a.ansatz.eta().to_latex_with(n)),
                ),
                text(format!("unknown functions: {}", join(&fns))),
            ],
        });

        let mut items = vec![text(format!(
            "{} equations in {}, one per coefficient of {}'^p {}^q:",
            a.tsys.len(),
            n.indep,
            n.dep,
            n.dep
        ))];
        for e in a.tsys.equations() {
            let (lt, ll) = xdot_label(e.xdot_power, n);
            let xq = Expr::jet(0).to_latex_with(n);
            items.push(math(
                format!("[{lt} {}^{}] {} = 0", n.dep, e.x_power, e.expr.display_with(n)),
                format!(
                    "{ll} {xq}^{{{}}} &: \\quad {} = 0",
                    e.x_power,
                    e.expr.to_latex_with(n)
                ),
            ));
        }
        items.push(text(format!(
            "linear system: {} rows in {} unknown coefficients",
            a.linear.rows().len(),
            a.linear.columns().len()
        )));
        let tr = &a.trace;
        let consts: Vec<String> = tr.free_constants.iter().map(|c| c.to_string()).collect();
        items.push(text(format!(
            "stage 1, equations with {}'^p for p >= 1: {} rows, solution family with free constants {}",
            n.dep,
            tr.stage1_rows,
            join(&consts)
        )));
        for (label, e) in &tr.family {
            let ll = if label == "xi" { "\\xi" } else { "\\eta" };
            items.push(math(
                format!("{label} = {}", e.display_with(n)),
                format!("{ll} &= {}", e.to_latex_with(n)),
            ));
        }
        let forced: Vec<String> = tr.forced_zero().iter().map(|c| c.to_string()).collect();
        items.push(text(format!(
            "stage 2, equation with {}'^0 on the family: {} rows, forced to zero: {}, remaining dimension {}",
            n.dep,
            tr.stage2_system.rows().len(),
            join(&forced),
            tr.stage2.dim()
        )));
        sections.push(Section {
            title: "Reduced systems",
            items,
        });

        let mut items = vec![text(format!("dimension {}", a.dim()))];
        for (k, g) in a.generators().iter().enumerate() {
            items.push(math(
                format!("X{}: xi = {}, eta = {}", k + 1, g.xi().display_with(n), g.eta().display_with(n)),
                format!(
                    "X_{{{}}} &: \\quad \\xi = {}, \\quad \\eta = {}",
                    k + 1,
                    g.xi().to_latex_with(n),
                    g.eta().to_latex_with(n)
                ),
            ));
        }
        let verification = if a.dim() == 0 {
            "verification: empty basis, nothing to check".to_string()
        } else if a.verification.passed() {
            "verification: every generator satisfies the symmetry condition identically".to_string()
        } else {
            let failed: Vec<String> =
                a.verification.failures().iter().map(|i| format!("X{}", i + 1)).collect();
            format!("verification FAILED for {}", failed.join(", "))
        };
        items.push(text(verification));
        if let Some(inc) = &a.basis.inconsistency {
            items.push(text(format!(
                "inconsistent row {}: constant {}",
                inc.origin.display_with(n),
                inc.constant
            )));
        }
        sections.push(Section {
            title: "Basis",
            items,
        });

        let generic = self.genericity();
        let items = if generic.is_empty() {
            vec![text("none")]
        } else {
            generic.iter().map(|(s, g)| genericity_item(g, s)).collect()
        };
        sections.push(Section {
            title: "Genericity conditions",
            items,
        });

        if !self.references.is_empty() {
            let mut items = Vec::new();
            for r in &self.references {
                let (lt, _) = xdot_label(r.xdot_power, n);
                let mode = if r.up_to_x_power { ", up to a power of the dependent variable" } else { "" };
                items.push(text(format!(
                    "{} against the {lt} equation{mode}: {}",
                    r.key,
                    if r.flags.is_empty() {
                        "match".to_string()
                    } else {
                        format!("{} flagged terms", r.flags.len())
                    }
                )));
                items.extend(r.flags.iter().map(|f| text(format!("  flag {f}"))));
            }
            sections.push(Section {
                title: "Reference comparison",
                items,
            });
        }

        sections.push(Section {
            title: "Verdict",
            items: vec![
                text("scope: polynomial ansatz class stated above"),
                text(a.verdict()),
            ],
        });
        sections
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("Lie point-symmetry report\n");
        for s in self.sections() {
            out.push_str(&format!("\n== {} ==\n", s.title));
            for item in s.items {
                match item {
                    Item::Text(t) => out.push_str(&t),
                    Item::Math { text, .. } => {
                        out.push_str("  ");
                        out.push_str(&text);
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::from(
            "\\documentclass{article}\n\\usepackage{amsmath}\n\\allowdisplaybreaks\n\
             \\begin{document}\n\\section*{Lie point-symmetry report}\n",
        );
        fn flush(out: &mut String, lines: &mut Vec<String>) {
            if !lines.is_empty() {
                out.push_str("\\begin{align*}\n");
                out.push_str(&lines.join(" \\\\\n"));
                out.push_str("\n\\end{align*}\n");
                lines.clear();
            }
        }
        for s in self.sections() {
            out.push_str(&format!("\n\\subsection*{{{}}}\n", s.title));
            let mut lines = Vec::new();
            for item in s.items {
                match item {
                    Item::Text(t) => {
                        flush(&mut out, &mut lines);
                        out.push_str(&escape_latex(&t));
                        out.push_str("\n\n");
                    }
                    Item::Math { latex, .. } => lines.push(latex),
                }
            }
            flush(&mut out, &mut lines);
        }
        out.push_str("\n\\end{document}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let a = &self.analysis;
        let ode = &a.ode;
        let n = ode.names();
        let s = |e: &Expr| e.display_with(n);
        let tr = &a.trace;
        json!({
            "schema": SCHEMA,
            "ode": {
                "source": self.source,
                "equation": ode.display(),
                "order": ode.order(),
                "indep": n.indep,
                "dep": n.dep,
                "params": ode.params().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "bindings": self.bindings.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
                "side_conditions": ode.side_conditions(),
            },
            "prolongation": self.prolongations.iter().enumerate()
                .map(|(k, p)| json!({"order": k + 1, "expr": s(p)})).collect::<Vec<_>>(),
            "symmetry_condition": {
                "multiplier": self.condition.clearing.describe(n),
                "expr": s(&self.condition.expr),
            },
            "determining_system": a.det.equations.iter()
                .map(|e| json!({"xdot_power": e.xdot_power, "expr": s(&e.expr)})).collect::<Vec<_>>(),
            "ansatz": {
                "deg_x": a.config.deg_x,
                "deg_t": a.config.deg_t,
                "xi": s(a.ansatz.xi()),
                "eta": s(a.ansatz.eta()),
                "functions": a.ansatz.functions().into_iter().map(|f| Atom::Fn(f).display_with(n)).collect::<Vec<_>>(),
            },
            "reduced": {
                "t_equations": a.tsys.equations().iter()
                    .map(|e| json!({"xdot_power": e.xdot_power, "x_power": e.x_power, "expr": s(&e.expr)}))
                    .collect::<Vec<_>>(),
                "linear_system": {"rows": a.linear.rows().len(), "unknowns": a.linear.columns().len()},
                "stage1": {
                    "rows": tr.stage1_rows,
                    "free_constants": tr.free_constants.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "family": tr.family.iter().map(|(k, e)| json!({"component": k, "expr": s(e)})).collect::<Vec<_>>(),
                },
                "stage2": {
                    "rows": tr.stage2_system.rows().len(),
                    "forced_zero": tr.forced_zero().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "dimension": tr.stage2.dim(),
                },
            },
            "basis": {
                "dimension": a.dim(),
                "generators": a.generators().iter()
                    .map(|g| json!({"xi": s(g.xi()), "eta": s(g.eta())})).collect::<Vec<_>>(),
                "verification": {
                    "passed": a.verification.passed(),
                    "failures": a.verification.failures(),
                },
            },
            "genericity": self.genericity().iter()
                .map(|(stage, g)| json!({"divisor": g.divisor.to_string(), "origin": g.origin, "stage": stage}))
                .collect::<Vec<_>>(),
            "reference": self.references.iter()
                .map(|r| json!({"key": r.key, "xdot_power": r.xdot_power, "up_to_x_power": r.up_to_x_power, "flags": r.flags}))
                .collect::<Vec<_>>(),
            "verdict": a.verdict(),
        })
    }
}

/// Parses `key = expr` lines, keys of the form `xdotN` or `xdotN_label`, and
/// compares each against the computed equation for `ẋ^N`.
pub fn compare_reference(
    text: &str,
    analysis: &Analysis,
    parse: impl Fn(&str) -> Result<Expr, String>,
) -> Result<Vec<ReferenceCheck>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("line {}: {msg}", i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at("expected `key = expr`".into()))?;
        let key = key.trim();
        let rest = key
            .strip_prefix("xdot")
            .ok_or_else(|| at(format!("key `{key}` does not start with xdot")))?;
        let (digits, label) = match rest.split_once('_') {
            Some((d, l)) => (d, Some(l)),
            None => (rest, None),
        };
        let xdot_power: u32 = digits
            .parse()
            .map_err(|_| at(format!("key `{key}` lacks a power after xdot")))?;
        let computed = analysis
            .det
            .equation(xdot_power)
            .ok_or_else(|| at(format!("no determining equation for power {xdot_power}")))?;
        let reference = parse(value.trim()).map_err(at)?;
        let diff = if label.is_some() {
            term_diff_up_to_x_power(computed, &reference)
        } else {
            term_diff(computed, &reference)
        };
        out.push(ReferenceCheck {
            key: key.to_string(),
            xdot_power,
            up_to_x_power: label.is_some(),
            flags: diff.render(analysis.ode.names()),
        });
    }
    Ok(out)
}

/// Escapes text for a LaTeX paragraph.
pub fn escape_latex(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '<' => out.push_str("\\textless{}"),
            '>' => out.push_str("\\textgreater{}"),
            _ => out.push(c),
        }
    }
    out
}
