//! Numerical braid monodromy of a stage along loops in its base.
//!
//! Roots are followed with an adaptive step. Whenever two roots swap their
//! order in the projection `Re(w) + δ Im(w)^2`, `w = z e^{-iθ}`, one Artin
//! letter is recorded: with `a` the left strand before the swap, the letter
//! is `σ_i` if `Im(a) < Im(b)` in the rotated frame and `σ_i^{-1}`
//! otherwise. With this convention a counterclockwise full twist of two
//! strands is `σ_1^2`. A small default bend `δ` separates crossings that are
//! simultaneous for every linear projection, as happens for roots symmetric
//! about the origin. All loops at one basepoint are read in one reference
//! frame; a loop that is degenerate there is read in another frame and
//! conjugated back by the braid of the frame change.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::Chain;
use crate::error::{Error, Result};
use crate::roots::{base_generators, homological_root_hom, monomial, stage_root_map, unit, Generator, StageMap};
use crate::words::{crossing_numbers, linking_numbers, sigma_to_pure, AbelianBraidVector, BraidWord, PureBraidWord};

#[derive(Clone, Debug)]
pub struct TraceOptions {
    /// Loop radius. Defaults to a quarter of the smallest gap between
    /// punctures, capped at 1/2.
    pub epsilon: Option<f64>,
    /// Minimum number of steps per loop.
    pub density: usize,
    /// Seed for projection tilts and fallback loop directions.
    pub seed: u64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { epsilon: None, density: 256, seed: 0 }
    }
}

const MIN_STEP: f64 = 1e-13;
const MAX_TILTS: usize = 12;

#[derive(Clone, Debug)]
pub enum Segment {
    Line { from: C, to: C },
    /// Counterclockwise for positive `sweep`; angles in radians.
    Arc { center: C, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    fn at(&self, s: f64) -> C {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start, sweep } => center + C::from_polar(radius, start + sweep * s),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => {
                Segment::Arc { center, radius, start: start + sweep, sweep: -sweep }
            }
        }
    }
}

/// A closed loop in the base that moves one coordinate and keeps the
/// others at the basepoint.
#[derive(Clone, Debug)]
pub struct LoopSpec {
    pub generator: Generator,
    /// 1-based coordinate that moves.
    pub coordinate: usize,
    pub basepoint: Vec<C>,
    pub segments: Vec<Segment>,
    pub epsilon: f64,
}

impl LoopSpec {
    fn coordinate_at(&self, t: f64) -> C {
        let total: f64 = self.segments.iter().map(Segment::length).sum();
        let mut rest = t.clamp(0.0, 1.0) * total;
        for s in &self.segments {
            let len = s.length();
            if len == 0.0 {
                continue;
            }
            if rest <= len {
                return s.at(rest / len);
            }
            rest -= len;
        }
        self.segments.last().expect("loop has segments").at(1.0)
    }

    /// The base point at parameter `t ∈ [0, 1]`, truncated to `dims`
    /// coordinates.
    pub fn point(&self, t: f64, dims: usize) -> Vec<C> {
        let mut x = self.basepoint[..dims].to_vec();
        if self.coordinate <= dims {
            x[self.coordinate - 1] = self.coordinate_at(t);
        }
        x
    }

    pub fn reversed(&self) -> LoopSpec {
        LoopSpec { segments: self.segments.iter().rev().map(Segment::reversed).collect(), ..self.clone() }
    }
}

/// Basepoint and generator loops for the base of one stage.
#[derive(Clone, Debug)]
pub struct BaseLoops {
    pub basepoint: Vec<C>,
    pub loops: Vec<LoopSpec>,
}

fn min_gap(points: &[C]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            g = g.min((points[i] - points[j]).norm());
        }
    }
    g
}

/// Loops for the first coordinate, whose punctures are roots of unity.
/// Basepoint `1 - ε`; the axis loop is the circle of radius `1 - ε`; the
/// loop about `e^{2πir}` runs along that circle to angle `2πr`, circles the
/// puncture counterclockwise at radius `ε`, and returns.
fn first_coordinate_loops(points: &[C], opts: &TraceOptions) -> Result<(C, Vec<LoopSpec>)> {
    let gap = min_gap(points);
    let eps = match opts.epsilon {
        Some(e) if e <= 0.0 || e >= 1.0 || e >= gap / 2.0 => {
            return Err(Error::Infeasible(format!("epsilon {e} must lie in (0, min(1, gap/2)) with gap {gap}")))
        }
        Some(e) => e,
        None => (gap / 4.0).min(0.5),
    };
    let base = C::new(1.0 - eps, 0.0);
    let mut loops = vec![LoopSpec {
        generator: Generator { stage: 1, index: 0 },
        coordinate: 1,
        basepoint: Vec::new(),
        segments: vec![Segment::Arc { center: C::new(0.0, 0.0), radius: 1.0 - eps, start: 0.0, sweep: 2.0 * PI }],
        epsilon: eps,
    }];
    for (p, z) in points.iter().enumerate() {
        let mut angle = z.arg();
        if angle < -1e-12 {
            angle += 2.0 * PI;
        }
        let mut segments = Vec::new();
        if angle > 1e-12 {
            segments.push(Segment::Arc { center: C::new(0.0, 0.0), radius: 1.0 - eps, start: 0.0, sweep: angle });
        }
        segments.push(Segment::Arc { center: *z, radius: eps, start: angle + PI, sweep: 2.0 * PI });
        if angle > 1e-12 {
            segments.push(Segment::Arc { center: C::new(0.0, 0.0), radius: 1.0 - eps, start: angle, sweep: -angle });
        }
        loops.push(LoopSpec {
            generator: Generator { stage: 1, index: p + 1 },
            coordinate: 1,
            basepoint: Vec::new(),
            segments,
            epsilon: eps,
        });
    }
    Ok((base, loops))
}

/// Coordinates `(along, across)` of `z` in the frame with `u` pointing up.
fn frame(z: C, u: C) -> (f64, f64) {
    let w = z * u.conj();
    (w.re, -w.im)
}

fn unframe(along: f64, across: f64, u: C) -> C {
    C::new(along, -across) * u
}

/// Standard generators for a coordinate `k ≥ 2`: the basepoint sits above
/// every puncture (in direction `u`) and above every position the punctures
/// take along loops of lower coordinates. Each loop runs across, straight
/// down to distance `ε` above its puncture, around it counterclockwise, and
/// back the same way.
fn upper_coordinate_loops(
    stage: usize,
    punctures: &[C],
    avoid: &[C],
    opts: &TraceOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(C, Vec<LoopSpec>)> {
    let mut all = vec![C::new(0.0, 0.0)];
    all.extend_from_slice(punctures);
    let gap = min_gap(&all);
    let eps = opts.epsilon.map_or(gap / 4.0, |e| e.min(gap / 4.0));
    let mut u = C::new(0.0, 1.0);
    for attempt in 0.. {
        let framed: Vec<(f64, f64)> = all.iter().map(|&z| frame(z, u)).collect();
        let blocked = framed.iter().enumerate().any(|(i, a)| {
            framed.iter().enumerate().any(|(j, b)| i != j && b.0 > a.0 - eps && (b.1 - a.1).abs() < 2.0 * eps)
        });
        if !blocked {
            break;
        }
        if attempt >= 64 {
            return Err(Error::Numeric(format!("no clear loop direction for coordinate {stage}")));
        }
        u = C::from_polar(1.0, PI / 2.0 + rng.gen_range(-1.2..1.2));
    }
    let framed: Vec<(f64, f64)> = all.iter().map(|&z| frame(z, u)).collect();
    let top = framed
        .iter()
        .map(|p| p.0)
        .chain(avoid.iter().map(|&z| frame(z, u).0))
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = framed.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
    let height = top + 1.0 + 0.25 * spread;
    let across0 = framed.iter().map(|p| p.1).sum::<f64>() / framed.len() as f64;
    let base = unframe(height, across0, u);
    let loops = framed
        .iter()
        .enumerate()
        .map(|(index, &(along, across))| {
            let over = unframe(height, across, u);
            let near = unframe(along + eps, across, u);
            let center = all[index];
            let start = (near - center).arg();
            LoopSpec {
                generator: Generator { stage, index },
                coordinate: stage,
                basepoint: Vec::new(),
                segments: vec![
                    Segment::Line { from: base, to: over },
                    Segment::Line { from: over, to: near },
                    Segment::Arc { center, radius: eps, start, sweep: 2.0 * PI },
                    Segment::Line { from: near, to: over },
                    Segment::Line { from: over, to: base },
                ],
                epsilon: eps,
            }
        })
        .collect();
    Ok((base, loops))
}

/// Basepoint and generator loops of every stage below `k`. Loop generator
/// indices count punctures of the stage fiber: 0 is the axis, then the
/// roots in the order produced by the stage map.
pub fn base_loops(chain: &Chain, k: usize, opts: &TraceOptions) -> Result<BaseLoops> {
    chain.stage(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_100b);
    let mut q: Vec<C> = Vec::new();
    let mut loops: Vec<LoopSpec> = Vec::new();
    for kp in 1..k {
        let map = stage_root_map(chain, kp)?;
        let punctures = map.evaluate(&q)[1..].to_vec();
        let (base, mut new) = if kp == 1 {
            first_coordinate_loops(&punctures, opts)?
        } else {
            let mut avoid = Vec::new();
            for lp in &loops {
                let mut full = lp.clone();
                full.basepoint = q.clone();
                for s in 0..=512 {
                    avoid.extend(map.evaluate(&full.point(s as f64 / 512.0, kp - 1))[1..].iter().copied());
                }
            }
            upper_coordinate_loops(kp, &punctures, &avoid, opts, &mut rng)?
        };
        q.push(base);
        loops.append(&mut new);
    }
    for lp in &mut loops {
        lp.basepoint = q.clone();
    }
    Ok(BaseLoops { basepoint: q, loops })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceDiagnostics {
    pub steps: usize,
    pub rejected_steps: usize,
    pub min_gap: f64,
    pub tilt: f64,
    pub bend: f64,
    pub attempts: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceResult {
    /// Letters index positions, strands ordered by projected real part at
    /// the basepoint.
    pub sigma_word: BraidWord,
    /// `permutation[p]` is the end position of the strand starting at `p`.
    pub permutation: Vec<usize>,
    /// Root label (1-based, as produced by the stage map) at each position.
    pub labels: Vec<usize>,
    /// Signed crossing counts indexed by root labels.
    pub crossings: AbelianBraidVector,
    /// Linking numbers indexed by root labels, for pure braids.
    pub linking: Option<AbelianBraidVector>,
    /// Word in the pure braid generators, indexed by positions.
    pub pure_word: Option<PureBraidWord>,
    /// Homology class of the traced loop in the generator basis of the
    /// base, when every base stage is strict. Filled by `stage_monodromy`.
    pub loop_class: Option<Vec<i64>>,
    pub diagnostics: TraceDiagnostics,
}

/// Roots at `x`, with the roots of each factor matched to `prev` (same
/// layout) by nearest neighbour. `None` if the matching is ambiguous.
fn matched_roots(map: &StageMap, x: &[C], prev: Option<&[C]>) -> Option<Vec<C>> {
    let raw = map.evaluate(x);
    let (Some(prev), StageMap::Coefficients(c)) = (prev, map) else { return Some(raw) };
    let mut out = raw.clone();
    let mut offset = 1;
    for (deg, _, _) in &c.factors {
        let d = *deg as usize;
        let block = offset..offset + d;
        let mut used = vec![false; d];
        for slot in block.clone() {
            let (best, _) = block
                .clone()
                .map(|j| (j, (raw[j] - prev[slot]).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            if used[best - offset] {
                return None;
            }
            used[best - offset] = true;
            out[slot] = raw[best];
        }
        offset += d;
    }
    Some(out)
}

/// Projection used to read crossings: `Re(w) + bend Im(w)^2 / scale` with
/// `w = z e^{-i tilt}`; the in-front/behind coordinate is `Im(w)`.
#[derive(Clone, Copy, Debug)]
struct Frame {
    tilt: f64,
    bend: f64,
    scale: f64,
}

impl Frame {
    fn proj(&self, z: C) -> f64 {
        let w = z * C::from_polar(1.0, -self.tilt);
        w.re + self.bend * w.im * w.im / self.scale
    }

    fn depth(&self, z: C) -> f64 {
        (z * C::from_polar(1.0, -self.tilt)).im
    }

    /// Homeomorphism `Φ` of the plane with `self.proj(Φ(z)) = other.proj(z)`
    /// and `self.depth(Φ(z)) = other.depth(z)`: reading a path in `other`
    /// is reading its image under `Φ` in `self`.
    fn transfer(&self, other: &Frame, z: C) -> C {
        let v = other.depth(z);
        let u = other.proj(z) - self.bend * v * v / self.scale;
        C::new(u, v) * C::from_polar(1.0, self.tilt)
    }

    fn lerp(&self, other: &Frame, s: f64) -> Frame {
        Frame {
            tilt: self.tilt + s * (other.tilt - self.tilt),
            bend: self.bend + s * (other.bend - self.bend),
            scale: self.scale,
        }
    }
}

/// Small fixed bend of the default frame. It leaves the order of real
/// points alone and breaks the symmetry of root sets closed under `z ↦ -z`
/// or `z ↦ 1/z`.
const DEFAULT_BEND: f64 = 0.0173;

struct Reading {
    letters: Vec<(usize, i32)>,
    end_values: Vec<C>,
    steps: usize,
    rejected: usize,
    min_gap: f64,
}

fn start_order(frame: &Frame, start: &[C]) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..start.len()).collect();
    order.sort_by(|&a, &b| frame.proj(start[a]).total_cmp(&frame.proj(start[b])));
    let tie = order
        .windows(2)
        .any(|w| (frame.proj(start[w[1]]) - frame.proj(start[w[0]])).abs() < 1e-9 * frame.scale);
    (!tie).then_some(order)
}

/// Reads the braid of a path of point configurations in `frame`. `path(t,
/// prev)` returns the configuration at `t` with slots matched to `prev`, or
/// `None` if the matching is ambiguous. `Ok(None)` means the frame is
/// degenerate for this path.
fn read_path(
    path: &dyn Fn(f64, &[C]) -> Option<Vec<C>>,
    start: &[C],
    frame: &Frame,
    density: usize,
) -> Result<Option<Reading>> {
    let n = start.len();
    let Some(start_order) = start_order(frame, start) else { return Ok(None) };
    let mut order = start_order;
    let mut vals = start.to_vec();
    let mut t = 0.0;
    let h_max = 1.0 / density.max(1) as f64;
    let mut h = h_max;
    let mut letters: Vec<(usize, i32)> = Vec::new();
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut gap_seen = min_gap(&vals);
    if gap_seen < 1e-12 {
        return Err(Error::Numeric("roots collide at the basepoint".into()));
    }

    while t < 1.0 {
        let t1 = (t + h).min(1.0);
        let next = path(t1, &vals);
        let accepted = next.as_ref().and_then(|next| {
            let g0 = min_gap(&vals);
            let g1 = min_gap(next);
            let disp = vals.iter().zip(next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            (disp < 0.5 * g0.min(g1)).then_some(g1)
        });
        let Some(g1) = accepted else {
            rejected += 1;
            h /= 2.0;
            if h < MIN_STEP {
                return Err(Error::Numeric(format!(
                    "step size collapsed at t = {t:.6} (min gap {gap_seen:.3e}); the loop may touch the discriminant"
                )));
            }
            continue;
        };
        let next = next.expect("accepted step has roots");
        if g1 < 1e-12 {
            return Err(Error::Numeric(format!("roots collide at t = {t1:.6}")));
        }

        // Order swaps within the step, by linear interpolation.
        let mut events: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let d0 = frame.proj(vals[a]) - frame.proj(vals[b]);
                let d1 = frame.proj(next[a]) - frame.proj(next[b]);
                if (d0 < 0.0) != (d1 < 0.0) {
                    events.push((d0 / (d0 - d1), a, b));
                }
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut trial = order.clone();
        let mut trial_letters = Vec::new();
        let mut ok = true;
        for (e, &(s, a, b)) in events.iter().enumerate() {
            let clash = events[e + 1..]
                .iter()
                .take_while(|x| x.0 - s < 1e-9)
                .any(|x| x.1 == a || x.1 == b || x.2 == a || x.2 == b);
            if clash {
                return Ok(None);
            }
            let pa = trial.iter().position(|&x| x == a).expect("slot present");
            let pb = trial.iter().position(|&x| x == b).expect("slot present");
            if pa.abs_diff(pb) != 1 {
                ok = false;
                break;
            }
            let (left, right, i) = if pa < pb { (a, b, pa) } else { (b, a, pb) };
            let zl = vals[left] + (next[left] - vals[left]) * s;
            let zr = vals[right] + (next[right] - vals[right]) * s;
            let di = frame.depth(zl) - frame.depth(zr);
            if di.abs() < 1e-12 * frame.scale {
                return Ok(None);
            }
            trial_letters.push((i + 1, if di < 0.0 { 1 } else { -1 }));
            trial.swap(i, i + 1);
        }
        if !ok {
            rejected += 1;
            h /= 2.0;
            if h < MIN_STEP {
                return Err(Error::Numeric(format!("could not separate crossings near t = {t:.6}")));
            }
            continue;
        }
        order = trial;
        letters.extend(trial_letters);
        vals = next;
        t = t1;
        steps += 1;
        gap_seen = gap_seen.min(g1);
        h = (h * 2.0).min(h_max);
    }
    Ok(Some(Reading { letters, end_values: vals, steps, rejected, min_gap: gap_seen }))
}

/// Reference frame for a basepoint configuration: the default frame unless
/// it has a tie there. Depends only on the configuration and the seed, so
/// every loop at a common basepoint is read with the same strand order.
fn reference_frame(start: &[C], scale: f64, seed: u64) -> Result<Frame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f4a3);
    let mut frame = Frame { tilt: 0.0, bend: DEFAULT_BEND, scale };
    for _ in 0..MAX_TILTS {
        if start_order(&frame, start).is_some() {
            return Ok(frame);
        }
        frame = Frame { tilt: rng.gen_range(-0.3..0.3), bend: DEFAULT_BEND, scale };
    }
    Err(Error::Numeric("no projection separates the roots at the basepoint".into()))
}

/// Traces the roots of a stage map along a loop and reads off the braid.
pub fn trace_loop(map: &StageMap, lp: &LoopSpec, opts: &TraceOptions) -> Result<TraceResult> {
    let dims = map.base_dim();
    let start = map.evaluate(&lp.point(0.0, dims));
    let n = start.len();
    let scale = start.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let reference = reference_frame(&start, scale, opts.seed)?;
    let path = |t: f64, prev: &[C]| matched_roots(map, &lp.point(t, dims), Some(prev));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut frame = reference;
    let mut found = None;
    for attempt in 0..MAX_TILTS {
        if let Some(reading) = read_path(&path, &start, &frame, opts.density)? {
            if attempt == 0 {
                found = Some((reading, Vec::new(), attempt));
                break;
            }
            // Conjugate back: the frame change is the braid of `Φ_s(start)`
            // read in the reference frame.
            let change = |s: f64, _: &[C]| {
                let f = reference.lerp(&frame, s);
                Some(start.iter().map(|&z| reference.transfer(&f, z)).collect())
            };
            if let Some(c) = read_path(&change, &start, &reference, opts.density)? {
                found = Some((reading, c.letters, attempt));
                break;
            }
        }
        frame = Frame {
            tilt: rng.gen_range(-0.3..0.3),
            bend: rng.gen_range(0.01..0.08) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            scale,
        };
    }
    let Some((reading, change, attempt)) = found else {
        return Err(Error::Numeric(format!("projection stayed degenerate after {MAX_TILTS} frames")));
    };

    let mut letters = change.clone();
    letters.extend(reading.letters.iter().copied());
    letters.extend(change.iter().rev().map(|&(i, e)| (i, -e)));
    let sigma_word = BraidWord { strands: n, letters }.reduced();
    let order = start_order(&reference, &start).expect("reference frame separates the basepoint");
    let labels: Vec<usize> = order.iter().map(|&s| s + 1).collect();
    let vals = reading.end_values;

    // The root set must close up; at root-map stages every root returns.
    let end_perm: Vec<usize> = (0..n)
        .map(|s| {
            (0..n).min_by(|&a, &b| (vals[s] - start[a]).norm().total_cmp(&(vals[s] - start[b]).norm())).unwrap()
        })
        .collect();
    let closes = (0..n).all(|s| (vals[s] - start[end_perm[s]]).norm() < 1e-6 * scale);
    if !closes {
        return Err(Error::Numeric("traced roots do not close up".into()));
    }
    if matches!(map, StageMap::Roots(_)) && end_perm.iter().enumerate().any(|(a, &b)| a != b) {
        return Err(Error::Numeric("root map monodromy permuted roots".into()));
    }

    let permutation = sigma_word.permutation();
    let start_pos = |slot: usize| labels.iter().position(|&l| l == slot + 1).expect("slot labeled");
    for (p, &l) in labels.iter().enumerate() {
        if permutation[p] != start_pos(end_perm[l - 1]) {
            return Err(Error::Internal("braid permutation disagrees with traced roots".into()));
        }
    }
    let relabel = |v: &AbelianBraidVector| {
        let mut out = AbelianBraidVector::zero(n);
        for a in 1..=n {
            for b in a + 1..=n {
                out.add(labels[a - 1], labels[b - 1], v.get(a, b));
            }
        }
        out
    };
    let crossings = relabel(&crossing_numbers(&sigma_word));
    let pure = sigma_word.is_pure();
    let linking = if pure { Some(relabel(&linking_numbers(&sigma_word)?)) } else { None };
    let pure_word = if pure { Some(sigma_to_pure(&sigma_word)?) } else { None };
    Ok(TraceResult {
        sigma_word,
        permutation,
        labels,
        crossings,
        linking,
        pure_word,
        loop_class: None,
        diagnostics: TraceDiagnostics {
            steps: reading.steps,
            rejected_steps: reading.rejected,
            min_gap: reading.min_gap,
            tilt: frame.tilt,
            bend: frame.bend,
            attempts: attempt + 1,
        },
    })
}

/// Winding number about 0 of `f` on `[0, 1]`, sampled finely enough that
/// consecutive arguments differ by less than a quarter turn.
fn winding(f: &dyn Fn(f64) -> C, density: usize) -> Result<i64> {
    let mut total = 0.0;
    let mut t = 0.0;
    let mut prev = f(0.0);
    let h_max = 1.0 / density.max(1) as f64;
    let mut h = h_max;
    while t < 1.0 {
        let t1 = (t + h).min(1.0);
        let next = f(t1);
        if next.norm() < 1e-12 {
            return Err(Error::Numeric(format!("winding path passes through 0 at t = {t1:.6}")));
        }
        let d = (next / prev).arg();
        if d.abs() > PI / 4.0 {
            h /= 2.0;
            if h < MIN_STEP {
                return Err(Error::Numeric("winding path turns too fast".into()));
            }
            continue;
        }
        total += d;
        prev = next;
        t = t1;
        h = (h * 2.0).min(h_max);
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Homology class of a base loop of stage `k` in the basis of
/// `base_generators(chain, k)`, or `None` if some base stage is not strict.
///
/// The basis loops are small circles about one puncture of one coordinate,
/// the others held at the basepoint. A traced loop keeps the later
/// coordinates at the basepoint while its own coordinate travels, so later
/// roots may wind around the held values. The forms `dlog(x_j - b(x))`, one
/// per puncture `b` of each coordinate `j`, are triangular against the
/// basis, which gives the correction.
pub fn loop_class(chain: &Chain, k: usize, lp: &LoopSpec, density: usize) -> Result<Option<Vec<i64>>> {
    let gens = base_generators(chain, k);
    if chain.stages[..k - 1].iter().any(|s| !s.is_strict()) {
        return Ok(None);
    }
    let c = lp.coordinate;
    let mut class = vec![0i64; gens.len()];
    let at = |g: Generator| gens.iter().position(|&h| h == g).expect("generator listed");
    class[at(lp.generator)] = 1;
    for cp in c + 1..k {
        let stage = chain.stage(cp)?;
        let held = lp.basepoint[cp - 1];
        for (p, h) in stage.members.iter().enumerate() {
            let (mu, m) = h.solved();
            let root = |t: f64| unit(mu) * monomial(&lp.point(t, cp - 1), &m);
            let w = winding(&|t| held - root(t), density)?;
            let small_circle = if lp.generator.index == 0 { m[c - 1].min(0) } else { 0 };
            class[at(Generator { stage: cp, index: p + 1 })] = w - small_circle;
        }
    }
    Ok(Some(class))
}

/// Monodromy of stage `k` along every generator loop of its base. At
/// strictly supersolvable stages each trace is checked against the closed
/// form of the induced map on homology, applied to the class of the traced
/// loop, and retried with a finer step and a different seed if they
/// disagree.
pub fn stage_monodromy(chain: &Chain, k: usize, opts: &TraceOptions) -> Result<Vec<(Generator, TraceResult)>> {
    let map = stage_root_map(chain, k)?;
    let base = base_loops(chain, k, opts)?;
    let hrm = match map {
        StageMap::Roots(_) => Some(homological_root_hom(chain, k)?),
        StageMap::Coefficients(_) => None,
    };
    let mut out = Vec::with_capacity(base.loops.len());
    for lp in &base.loops {
        let class = loop_class(chain, k, lp, opts.density)?;
        let expected = match (&hrm, &class) {
            (Some(hrm), Some(class)) => {
                let mut row = vec![0i64; hrm.entries.first().map_or(0, Vec::len)];
                for (coef, entries) in class.iter().zip(&hrm.entries) {
                    for (r, e) in row.iter_mut().zip(entries) {
                        *r += coef * e;
                    }
                }
                Some(row)
            }
            _ => None,
        };
        let mut o = opts.clone();
        let mut result = trace_loop(&map, lp, &o)?;
        if let Some(row) = &expected {
            let mut tries = 0;
            while result.linking.as_ref().map(|v| &v.coords) != Some(row) {
                tries += 1;
                if tries > 3 {
                    return Err(Error::Numeric(format!(
                        "trace of {} disagrees with the homology formula after {tries} attempts",
                        lp.generator
                    )));
                }
                o.density *= 2;
                o.seed = o.seed.wrapping_add(1);
                result = trace_loop(&map, lp, &o)?;
            }
        }
        result.loop_class = class;
        out.push((lp.generator, result));
    }
    Ok(out)
}
