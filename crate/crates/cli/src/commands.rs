use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trifold::analysis::{
    layer_block_check, layer_period_check, period_check, star_violations, tile_counts, vertex_star_histogram,
};
use trifold::folding::{parse_word, patch, patch_ball, word_to_string, FoldDirection, FoldSource, FoldingSequence};
use trifold::io::{read_pattern, read_tiling, write_pattern, write_tiling, PatternFile, TilingFile, PATTERN_MAGIC};
use trifold::patch::PatternPatch;
use trifold::render::{render_pattern_svg, render_tiling_svg, Style};
use trifold::spectral::{density_sequence, eigen_report, eighth, word_matrix};
use trifold::substitution::{compose, natural_seed, SubRule};
use trifold::tiling::{reconstruct, strip_decoration, to_tiling, TilingError};
use trifold::unfold_sim::{parse_mixed_word, unfold_pattern, unfold_uniform, MixedFold};

use crate::args::*;

/// A run that completed but found a property violation (exit code 1).
#[derive(Debug)]
pub struct Violation(pub String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

pub struct Output {
    pub stdout: String,
}

impl Output {
    pub fn new() -> Self {
        Self { stdout: String::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

enum SeqInput {
    Regular(FoldingSequence),
    Mixed(Vec<MixedFold>),
}

impl SeqInput {
    fn parse(s: &str) -> Result<Self> {
        if s.contains(',') {
            Ok(Self::Mixed(parse_mixed_word(s)?))
        } else {
            Ok(Self::Regular(s.parse()?))
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Regular(seq) => seq.to_string(),
            Self::Mixed(w) => w.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

fn default_size(seq: &FoldingSequence) -> Result<u32> {
    match seq.depth() {
        Some(n) => Ok(n as u32),
        None => bail!("a periodic sequence needs --size or --radius"),
    }
}

/// First `k` folds of a regular sequence.
fn prefix(seq: &FoldingSequence, k: u32) -> Result<Vec<FoldDirection>> {
    seq.prefix(k as usize)
        .ok_or_else(|| anyhow!("sequence {seq} has fewer than {k} folds"))
}

fn subst_pattern(seq: &FoldingSequence, k: u32) -> Result<PatternPatch> {
    let word = prefix(seq, k)?;
    let rules: Vec<SubRule> = word.iter().map(|d| SubRule::from(*d)).collect();
    let next = seq.fold_at(k as usize + 1).unwrap_or(FoldDirection::Up);
    Ok(compose(&rules, 1, natural_seed(word.len(), next))?)
}

fn build_pattern(input: &SeqInput, size: Option<u32>, radius: Option<i64>, method: Method) -> Result<PatternPatch> {
    match input {
        SeqInput::Mixed(folds) => {
            if method != Method::Unfold {
                bail!("mixed folds can only be generated with --method unfold");
            }
            if radius.is_some() {
                bail!("mixed folds produce triangles; use --size");
            }
            let k = size.unwrap_or(folds.len() as u32) as usize;
            if k > folds.len() {
                bail!("sequence has only {} folds", folds.len());
            }
            Ok(unfold_pattern(&folds[..k]))
        }
        SeqInput::Regular(seq) => {
            if let Some(r) = radius {
                if r < 0 {
                    bail!("--radius must be nonnegative");
                }
                if method != Method::Closed {
                    bail!("balls are only generated with --method closed");
                }
                return Ok(patch_ball(seq, r)?);
            }
            let k = match size {
                Some(k) => k,
                None => default_size(seq)?,
            };
            match method {
                Method::Closed => Ok(patch(seq, k)?),
                Method::Unfold => Ok(unfold_uniform(&prefix(seq, k)?)),
                Method::Subst => subst_pattern(seq, k),
            }
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut Output) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out.stdout.push_str(text);
            Ok(())
        }
    }
}

fn load_window(w: &WindowArgs) -> Result<(PatternPatch, Option<String>)> {
    if let Some(path) = &w.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file = read_pattern(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok((file.patch, file.sequence));
    }
    let Some(seq) = &w.seq else { bail!("give --seq or --in") };
    let input = SeqInput::parse(seq)?;
    let method = if matches!(input, SeqInput::Mixed(_)) { Method::Unfold } else { Method::Closed };
    Ok((build_pattern(&input, w.size, w.radius, method)?, Some(input.label())))
}

pub fn generate(a: &GenerateArgs, out: &mut Output) -> Result<()> {
    let input = SeqInput::parse(&a.seq)?;
    let p = build_pattern(&input, a.size, a.radius, a.method)?;
    let file = PatternFile { sequence: Some(input.label()), patch: p };
    write_or_print(a.out.as_deref(), &write_pattern(&file), out)?;
    if let Some(path) = &a.tiling_out {
        let mut tiles = to_tiling(&file.patch);
        if a.undecorated {
            tiles.iter_mut().for_each(|t| t.decoration = None);
        }
        let tf = TilingFile { sequence: file.sequence.clone(), tiles };
        fs::write(path, write_tiling(&tf)).with_context(|| format!("writing {}", path.display()))?;
    }
    if a.out.is_some() {
        out.line(format!(
            "region {}: {} interior, {} boundary segments",
            file.patch.region(),
            file.patch.interior().len(),
            file.patch.boundary().len()
        ));
    }
    Ok(())
}

pub fn render(a: &RenderArgs, out: &mut Output) -> Result<()> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    if !(a.scale.is_finite() && a.scale > 0.0) {
        bail!("--scale must be positive");
    }
    let style = Style { scale: a.scale, draw_boundary: !a.no_boundary, ..Style::default() };
    let svg = if text.trim_start().starts_with(PATTERN_MAGIC) {
        let file = read_pattern(&text).with_context(|| format!("parsing {}", a.input.display()))?;
        render_pattern_svg(&file.patch, &style)
    } else {
        let file = read_tiling(&text).with_context(|| format!("parsing {}", a.input.display()))?;
        render_tiling_svg(&file.tiles, &style)
    };
    write_or_print(a.svg.as_deref(), &svg, out)
}

pub fn matrix(a: &MatrixArgs, out: &mut Output) -> Result<()> {
    let word = parse_word(&a.word)?;
    let m = word_matrix(&word).pow(a.power);
    out.stdout.push_str(&m.to_string());
    Ok(())
}

pub fn spectrum(a: &SpectrumArgs, out: &mut Output) -> Result<()> {
    let word = parse_word(&a.word)?;
    let r = eigen_report(&word)?;
    out.stdout.push_str(&match a.format {
        ReportFormat::Text => r.to_text(),
        ReportFormat::Kv => r.to_kv(),
    });
    if !r.all_checks_pass() {
        return Err(Violation(format!("eigen structure checks failed for {}", r.word)).into());
    }
    Ok(())
}

pub fn density(a: &DensityArgs, out: &mut Output) -> Result<()> {
    let word = parse_word(&a.word)?;
    if word.is_empty() {
        bail!("--word must be nonempty");
    }
    out.line(format!("word: ({})*", word_to_string(&word)));
    let seeds: Vec<usize> = match a.seed {
        Some(s) => vec![usize::from(s)],
        None => (1..=8).collect(),
    };
    let eighth = eighth();
    for seed in seeds {
        out.line(format!("seed {seed}"));
        for (n, v) in density_sequence(&word, a.steps, seed).iter().enumerate() {
            out.line(format!("  n={} {} deviation={}", n + 1, v, v.max_deviation(&eighth)));
        }
    }
    if let Some(max_n) = a.empirical {
        let all_up = FoldingSequence::Periodic(vec![FoldDirection::Up]);
        let mut mismatch = false;
        for n in 1..=max_n {
            let p = patch(&all_up, 2 * n)?;
            let counts = tile_counts(&p);
            let exact = density_sequence(&[FoldDirection::Up], 2 * n as usize, 1).pop().expect("n >= 1");
            let empirical = counts.densities();
            let same = empirical == exact.0;
            mismatch |= !same;
            let cells: Vec<String> = counts.counts.iter().map(ToString::to_string).collect();
            out.line(format!(
                "empirical side {}: counts ({}) {}",
                1u64 << (2 * n),
                cells.join(", "),
                if same { "matches" } else { "differs from" }
            ) + " exact vector");
        }
        if mismatch {
            return Err(Violation("empirical densities differ from the exact vectors".into()).into());
        }
    }
    Ok(())
}

fn verify_one(seq: &FoldingSequence, size: u32, methods: &[Method], out: &mut Output) -> Result<bool> {
    let mut built: Vec<(Method, PatternPatch)> = Vec::new();
    for m in methods {
        if !built.iter().any(|(b, _)| b == m) {
            built.push((*m, build_pattern(&SeqInput::Regular(seq.clone()), Some(size), None, *m)?));
        }
    }
    let mut ok = true;
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let (ma, pa) = &built[i];
            let (mb, pb) = &built[j];
            let agree = pa.interior_eq(pb);
            ok &= agree;
            out.line(format!(
                "{seq} size {size}: {} vs {}: {} ({} segments)",
                name(*ma),
                name(*mb),
                if agree { "agree" } else { "MISMATCH" },
                pa.interior().len()
            ));
        }
    }
    Ok(ok)
}

fn name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Unfold => "unfold",
        Method::Subst => "subst",
    }
}

pub fn verify(a: &VerifyArgs, rng_seed: u64, out: &mut Output) -> Result<()> {
    let distinct: std::collections::BTreeSet<&str> = a.methods.iter().map(|m| name(*m)).collect();
    if distinct.len() < 2 {
        bail!("--methods needs at least two distinct generators");
    }
    let mut ok = true;
    if let Some(count) = a.random {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        for _ in 0..count {
            let word: Vec<FoldDirection> = (0..a.len)
                .map(|_| if rng.gen::<bool>() { FoldDirection::Up } else { FoldDirection::Down })
                .collect();
            ok &= verify_one(&FoldingSequence::Finite(word), a.len as u32, &a.methods, out)?;
        }
    } else {
        let text = a.seq.as_deref().expect("clap requires --seq without --random");
        let seq = match SeqInput::parse(text)? {
            SeqInput::Regular(s) => s,
            SeqInput::Mixed(_) => bail!("mixed folds have no closed form or substitution to compare"),
        };
        let size = match a.size {
            Some(k) => k,
            None => default_size(&seq)?,
        };
        ok = verify_one(&seq, size, &a.methods, out)?;
    }
    if ok {
        Ok(())
    } else {
        Err(Violation("generators disagree".into()).into())
    }
}

pub fn reconstruct_cmd(a: &ReconstructArgs, out: &mut Output) -> Result<()> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let file = read_tiling(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let tiles = strip_decoration(&file.tiles);
    let rec = match reconstruct(&tiles, a.margin) {
        Ok(r) => r,
        Err(e @ TilingError::Inconsistent(_)) => {
            out.line(format!("result: inconsistent ({e})"));
            return Err(Violation(e.to_string()).into());
        }
        Err(e @ TilingError::Undecidable { .. }) => {
            out.line(format!("result: undecidable ({e})"));
            return Err(Violation(e.to_string()).into());
        }
    };
    out.line(format!("result: reconstructed {} segments with margin {}", rec.colors.len(), rec.margin));
    if let Some(path) = &a.out {
        let mut body = String::new();
        for (s, c) in &rec.colors {
            let _ = writeln!(body, "{} {} {} {}", s.direction(), s.p, s.q, c);
        }
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &a.reference {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let reference = read_pattern(&text).with_context(|| format!("parsing {}", path.display()))?;
        let bad = rec.mismatches(&reference.patch);
        out.line(format!("reference: {} mismatches", bad.len()));
        if !bad.is_empty() {
            return Err(Violation("reconstruction differs from the reference".into()).into());
        }
    }
    Ok(())
}

pub fn stars(a: &StarsArgs, out: &mut Output) -> Result<()> {
    let (p, label) = load_window(&a.window)?;
    if let Some(l) = label {
        out.line(format!("sequence: {l}"));
    }
    for (class, n) in vertex_star_histogram(&p) {
        out.line(format!("{class} {n}"));
    }
    let bad = star_violations(&p);
    out.line(format!("violations: {}", bad.len()));
    if let Some((v, s)) = bad.first() {
        out.line(format!("first violation: {v} {s}"));
        return Err(Violation(format!("{} vertex stars outside the allowed classes", bad.len())).into());
    }
    Ok(())
}

pub fn period(a: &PeriodArgs, out: &mut Output) -> Result<()> {
    let (p, label) = load_window(&a.window)?;
    if let Some(l) = label {
        out.line(format!("sequence: {l}"));
    }
    let mut violated = false;
    match a.layer {
        Some(k) => {
            let ts = layer_period_check(&p, k, a.max_norm)?;
            out.line(format!("layer {k} periods with norm <= {}: {}", a.max_norm, ts.len()));
            for (dp, dq) in ts {
                out.line(format!("  ({dp}, {dq})"));
            }
        }
        None => {
            let ts = period_check(&p, a.max_norm)?;
            out.line(format!("periods with norm <= {}: {}", a.max_norm, ts.len()));
            for (dp, dq) in &ts {
                out.line(format!("  ({dp}, {dq})"));
            }
            violated |= !ts.is_empty();
        }
    }
    if let Some(kmax) = a.blocks {
        for k in 1..=kmax {
            let ok = layer_block_check(&p, k)?;
            out.line(format!("layer {k} blocks of {}: {}", 1u64 << (k - 1), if ok { "ok" } else { "broken" }));
            violated |= !ok;
        }
    }
    if violated {
        return Err(Violation("window is periodic or has broken layer blocks".into()).into());
    }
    Ok(())
}
