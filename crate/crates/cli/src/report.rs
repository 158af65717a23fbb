//! One function per subcommand, each producing a JSON report and a text
//! rendering of it.

use std::fmt::Write as _;

use serde_json::{json, Value};
use toric_core::arrangement::{build_poset, format_value, Chain, Classification, IdealFailure, Layer};
use toric_core::fixtures::Fixture;
use toric_core::invariants::{
    betti_numbers, chain_complexity, cohomology_ideal, h2_image, homology_generators, lcs_ideal, lcs_rank_crosscheck,
    lcs_ranks, pi1_presentation, GroupPresentation,
};
use toric_core::roots::homological_root_hom;
use toric_core::tracer::{stage_monodromy, TraceOptions, TraceResult};
use toric_core::{Error, Result};

use crate::input::{self, ArrangementFile, Input, Resolved};

pub struct Report {
    pub json: Value,
    pub text: String,
}

pub fn error_json(err: &Error) -> String {
    let message = match err {
        Error::Parse(m) | Error::Infeasible(m) | Error::Numeric(m) | Error::CapExceeded(m) | Error::Internal(m) => m,
    };
    json!({ "error": { "category": err.category(), "message": message } }).to_string()
}

fn layer_json(x: &Layer) -> Value {
    json!({
        "codim": x.codim(),
        "lattice": x.lattice,
        "values": x.phi.iter().map(format_value).collect::<Vec<_>>(),
    })
}

fn layer_text(x: &Layer) -> String {
    if x.lattice.is_empty() {
        return "T".into();
    }
    let eqs: Vec<String> = x
        .lattice
        .iter()
        .zip(&x.phi)
        .map(|(row, v)| format!("{row:?} = {}", format_value(v)))
        .collect();
    eqs.join(", ")
}

pub fn poset(input: &Input, max_codim: Option<usize>, cap: usize) -> Result<Report> {
    let a = &input.arrangement;
    let p = build_poset(a, max_codim.unwrap_or(a.dim), cap)?;
    let mut text = format!("{}: {} layers\n", input.name, p.elements.len());
    for (i, x) in p.elements.iter().enumerate() {
        let below: Vec<String> = p.covers.iter().filter(|c| c.1 == i).map(|c| c.0.to_string()).collect();
        let _ = writeln!(text, "{i:>4}  codim {}  {}  covers [{}]", x.codim(), layer_text(x), below.join(" "));
    }
    let json = json!({
        "name": input.name,
        "dimension": p.dim,
        "elements": p.elements.iter().map(layer_json).collect::<Vec<_>>(),
        "covers": p.covers,
    });
    Ok(Report { json, text })
}

fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::StrictlySupersolvable => "strict",
        Classification::Supersolvable => "supersolvable",
    }
}

fn failure_text(input: &Input, f: &IdealFailure) -> String {
    let h = |i: usize| input.arrangement.hypersurfaces[i].to_string();
    match f {
        IdealFailure::Pair { first, second, layer } => format!(
            "H{first} {} and H{second} {} meet in the layer {} outside every invariant hypersurface",
            h(*first),
            h(*second),
            layer_text(layer)
        ),
        IdealFailure::Degree { hypersurface, degree } => {
            format!("H{hypersurface} {} meets the subtorus in {degree} components", h(*hypersurface))
        }
    }
}

fn chain_json(c: &Chain) -> Value {
    json!({
        "cocharacters": c.cocharacters,
        "fiber_ranks": c.fiber_ranks(),
        "stages": c.stages.iter().map(|s| json!({
            "stage": s.index,
            "strict": s.is_strict(),
            "members": s.members.iter().map(|h| json!({
                "source": h.source,
                "exponents": h.exponents,
                "degree": h.degree,
                "value": format_value(&h.value),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn stage_text(c: &Chain) -> String {
    let mut text = String::new();
    for s in &c.stages {
        let roots: Vec<String> = s
            .members
            .iter()
            .map(|h| {
                let (mu, m) = h.solved();
                let power = if h.degree.abs() == 1 { String::new() } else { format!("^{}", h.degree.abs()) };
                format!("x{}{power} = {}", s.index, root_text(&mu, &m))
            })
            .collect();
        let _ = writeln!(text, "  stage {} (n = {}): {}", s.index, s.fiber_rank(), roots.join("; "));
    }
    text
}

/// `exp(2πi mu) x^m`, e.g. `-x1^2` or `e(1/3) x1 x2^-1`.
fn root_text(mu: &toric_core::arrangement::Q, m: &[i64]) -> String {
    let mono: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    let mono = mono.join(" ");
    let unit = match format_value(mu).as_str() {
        "0" => String::new(),
        "1/2" => "-".into(),
        v => format!("e({v}) "),
    };
    match (unit.as_str(), mono.is_empty()) {
        ("", true) => "1".into(),
        ("-", true) => "-1".into(),
        _ => format!("{unit}{mono}"),
    }
}

pub fn classify(input: &Input) -> Result<Report> {
    let (json, text) = match input::resolve_chain(input)? {
        Resolved::Chain(c) => {
            let class = classification_name(c.classification());
            let text = format!("{}: {class}\n  chain {:?}\n{}", input.name, c.cocharacters, stage_text(&c));
            (json!({ "name": input.name, "classification": class, "chain": chain_json(&c) }), text)
        }
        Resolved::Invalid { level, failure } => {
            let why = failure_text(input, &failure);
            let text = format!("{}: invalid chain at level {level}: {why}\n", input.name);
            (json!({ "name": input.name, "classification": "invalid", "level": level, "witness": why }), text)
        }
        Resolved::Unknown => (
            json!({ "name": input.name, "classification": "unknown" }),
            format!("{}: unknown (no chain found)\n", input.name),
        ),
    };
    Ok(Report { json, text })
}

pub fn hrm(input: &Input, stage: usize) -> Result<Report> {
    let c = input::require_chain(input)?;
    let h = homological_root_hom(&c, stage)?;
    let columns = h.column_labels();
    let mut text = format!("{} stage {stage}: {} strands\n", input.name, h.strands);
    for (g, row) in h.rows.iter().zip(&h.entries) {
        let _ = writeln!(text, "  {g} -> {}", linear_text(row, &columns));
    }
    let json = json!({
        "name": input.name,
        "stage": stage,
        "strands": h.strands,
        "columns": columns,
        "rows": h.rows.iter().zip(&h.entries).map(|(g, e)| json!({ "generator": g.to_string(), "entries": e })).collect::<Vec<_>>(),
    });
    Ok(Report { json, text })
}

fn linear_text(coeffs: &[i64], names: &[String]) -> String {
    let mut out = String::new();
    for (c, n) in coeffs.iter().zip(names) {
        let (sign, abs) = if *c < 0 { ("-", -c) } else { ("+", *c) };
        match abs {
            0 => continue,
            1 if out.is_empty() && sign == "+" => out.push_str(n),
            1 => {
                let _ = write!(out, "{}{sign} {n}", if out.is_empty() { "" } else { " " });
            }
            _ if out.is_empty() && sign == "+" => {
                let _ = write!(out, "{abs}{n}");
            }
            _ => {
                let _ = write!(out, "{}{sign} {abs}{n}", if out.is_empty() { "" } else { " " });
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn trace_json(t: &TraceResult, verbose: bool) -> Value {
    let mut v = json!({
        "sigma_word": t.sigma_word.to_string(),
        "permutation": t.permutation,
        "labels": t.labels,
        "crossings": t.crossings.coords,
        "linking": t.linking.as_ref().map(|l| l.coords.clone()),
        "pure_word": t.pure_word.as_ref().map(ToString::to_string),
        "loop_class": t.loop_class,
    });
    if verbose {
        v["diagnostics"] = json!({
            "steps": t.diagnostics.steps,
            "rejected_steps": t.diagnostics.rejected_steps,
            "min_gap": t.diagnostics.min_gap,
            "tilt": t.diagnostics.tilt,
            "bend": t.diagnostics.bend,
            "attempts": t.diagnostics.attempts,
        });
    }
    v
}

pub fn trace(input: &Input, stage: Option<usize>, opts: &TraceOptions, verbose: bool) -> Result<Report> {
    let c = input::require_chain(input)?;
    let stages: Vec<usize> = match stage {
        Some(k) => vec![k],
        None => (2..=c.stages.len()).collect(),
    };
    let mut text = String::new();
    let mut out = Vec::new();
    for k in stages {
        let traces = stage_monodromy(&c, k, opts)?;
        let _ = writeln!(text, "{} stage {k}", input.name);
        for (g, t) in &traces {
            let linking = t.linking.as_ref().map_or("-".to_string(), ToString::to_string);
            let _ = writeln!(text, "  {g}: {}   linking {linking}", t.sigma_word);
        }
        out.push(json!({
            "stage": k,
            "traces": traces.iter().map(|(g, t)| {
                let mut v = trace_json(t, verbose);
                v["generator"] = json!(g.to_string());
                v
            }).collect::<Vec<_>>(),
        }));
    }
    Ok(Report { json: json!({ "name": input.name, "stages": out }), text })
}

pub fn pi1(input: &Input, opts: &TraceOptions) -> Result<Report> {
    let c = input::require_chain(input)?;
    let mono = (2..=c.stages.len()).map(|k| stage_monodromy(&c, k, opts)).collect::<Result<Vec<_>>>()?;
    let p = pi1_presentation(&c, &mono)?;
    let names: Vec<String> = p.generators.iter().map(|&g| GroupPresentation::name(g)).collect();
    let relations: Vec<String> = p.relations.iter().map(|r| p.relation_text(r)).collect();
    let text = format!("{}\n{p}", input.name);
    Ok(Report { json: json!({ "name": input.name, "generators": names, "relations": relations }), text })
}

pub fn lcs(input: &Input, degree: usize) -> Result<Report> {
    let c = input::require_chain(input)?;
    let gens = homology_generators(&c);
    let rels = lcs_ideal(&c)?;
    let mut fiber_ranks = c.fiber_ranks();
    fiber_ranks.extend(std::iter::repeat(1).take(input.arrangement.dim - c.dim));
    let ranks = lcs_ranks(&fiber_ranks, degree)?;
    let check = lcs_rank_crosscheck(&rels, &gens, &c.fiber_ranks())?;
    let rendered: Vec<String> = rels.iter().map(|r| r.render(&gens)).collect();
    let mut text = format!("{}: LCS ranks {ranks:?}\n", input.name);
    for r in &rendered {
        let _ = writeln!(text, "  {r}");
    }
    let _ = writeln!(
        text,
        "  relation rank {} = C({}, 2) - phi_2 = {} - {}: {}",
        check.relation_rank,
        gens.len(),
        check.pairs,
        check.phi2,
        check.holds
    );
    let json = json!({
        "name": input.name,
        "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "relations": rendered,
        "lcs_ranks": ranks,
        "rank_check": check,
    });
    Ok(Report { json, text })
}

pub fn cohomology(input: &Input) -> Result<Report> {
    let c = input::require_chain(input)?;
    let gens = homology_generators(&c);
    let coh = cohomology_ideal(&h2_image(&lcs_ideal(&c)?, &gens)?, &gens)?;
    let rendered: Vec<String> = coh.ideal_basis.iter().map(|v| coh.render(v)).collect();
    let mut text = format!("{}: degree-two ideal of rank {}\n", input.name, coh.rank());
    for r in &rendered {
        let _ = writeln!(text, "  {r}");
    }
    let basis: Vec<Vec<String>> = coh.ideal_basis.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
    let json = json!({
        "name": input.name,
        "generators": gens.iter().map(|g| format!("x({},{})", g.index, g.stage)).collect::<Vec<_>>(),
        "rank": coh.rank(),
        "ideal": rendered,
        "ideal_basis": basis,
    });
    Ok(Report { json, text })
}

pub fn betti(input: &Input) -> Result<Report> {
    let c = input::require_chain(input)?;
    let b = betti_numbers(&c, input.arrangement.dim)?;
    Ok(Report { text: format!("{}: {b:?}\n", input.name), json: json!({ "name": input.name, "betti": b }) })
}

pub fn tc(input: &Input) -> Result<Report> {
    let c = input::require_chain(input)?;
    let d = input.arrangement.dim;
    let tc = chain_complexity(&c, d)?;
    Ok(Report {
        text: format!("{}: TC = {tc} (d = {d}, r = {})\n", input.name, c.dim),
        json: json!({ "name": input.name, "tc": tc, "dimension": d, "rank": c.dim }),
    })
}

pub fn example(fx: &Fixture) -> Result<Report> {
    let file = ArrangementFile::from_fixture(fx);
    let json = serde_json::to_value(&file).map_err(|e| Error::Internal(e.to_string()))?;
    let mut text = format!("{} in dimension {}\n", fx.name, fx.arrangement.dim);
    for (i, h) in fx.arrangement.hypersurfaces.iter().enumerate() {
        let _ = writeln!(text, "  H{i}: {h}");
    }
    let _ = writeln!(text, "  chain {:?}", fx.chain);
    Ok(Report { json, text })
}
