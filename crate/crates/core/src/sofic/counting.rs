use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::lift::{LiftedMap, SoficSetup};
use crate::analysis::check_surjectivity_window;
use crate::engine::{decode_index, RuleField, Symbol};
use crate::error::{Error, Result};

/// Largest input space enumerated for `|Phi(A^{V(R)})|`.
pub const IMAGE_INPUT_CAP: u128 = 1 << 28;
/// Largest output space tracked by the image bitset.
pub const IMAGE_OUTPUT_CAP: u128 = 1 << 30;
/// Largest cone enumerated for one block count.
pub const BLOCK_CAP: u128 = 1 << 24;

/// Which target `Phi` is counted on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[serde(rename = "V(2R)")]
    V2R,
    #[serde(rename = "V(3R)")]
    V3R,
}

/// Both sides of one inequality, in natural logarithms where noted.
#[derive(Clone, Debug, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn le(name: &str, lhs: f64, rhs: f64) -> Self {
        // logs of exact integers; a relative slack covers rounding only
        let slack = 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
        Inequality { name: name.into(), lhs, rhs, holds: lhs <= rhs + slack }
    }
}

/// Figures from one counting run on a finite graph.
#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub r: usize,
    pub big_r: usize,
    pub alphabet: u32,
    pub vertices: usize,
    pub v_r: usize,
    pub v_big: usize,
    pub v_2big: usize,
    pub v_3big: usize,
    pub ball_big: usize,
    pub ball_2big: usize,
    pub centers: Vec<usize>,
    /// `|W-bar|`, the union of the packing balls.
    pub packed: usize,
    /// `|Gamma_{B(R)}|`, the image of the field over `B(R)`.
    pub gamma: u64,
    /// `|A|^{|B(R)|}`.
    pub gamma_total: u64,
    /// `|Z_{B(w,R)}|` for each center.
    pub blocks: Vec<u64>,
    pub blocks_match_gamma: bool,
    pub block_deficit: bool,
    pub target: Target,
    /// `|Phi(A^{V(R)})|`; absent beyond the enumeration caps.
    pub image: Option<u64>,
    /// `|A|^{|target|}`.
    pub image_total: u128,
    /// `|V(2R)| = |W| |B(R)| + |V(2R) \ W-bar|`.
    pub partition_identity: bool,
    /// `|W| |B(2R)| >= |V(3R)|`.
    pub cover_bound: bool,
    /// Largest `epsilon` with `|A|^eps (1 - |A|^{-|B(R)|})^{1/(2|B(2R)|)} < 1`.
    pub epsilon_post_surjective: f64,
    /// `1 - B2 log|A| / (B2 log|A| - log(1 - |A|^{-B1}))`.
    pub epsilon_injective: f64,
    pub inequalities: Vec<Inequality>,
}

/// Counts distinct outputs of `map` by odometer enumeration of its inputs,
/// updating only outputs that read the changed digits.
pub fn count_image(map: &LiftedMap) -> Result<u64> {
    let q = map.alphabet().size();
    let n = map.domain().len();
    let m = map.targets().len();
    let inputs = map.alphabet().pow(n).filter(|&t| t <= IMAGE_INPUT_CAP);
    let outputs = map.alphabet().pow(m).filter(|&t| t <= IMAGE_OUTPUT_CAP);
    let (Some(inputs), Some(outputs)) = (inputs, outputs) else {
        return Err(Error::TooLarge { entries: q as u128, cap: IMAGE_INPUT_CAP });
    };
    if q == 1 {
        return Ok(1);
    }
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..m {
        for &p in map.taps(i) {
            dependents[p].push(i);
        }
    }
    for d in &mut dependents {
        d.sort_unstable();
        d.dedup();
    }
    let weights: Vec<u64> = (0..m).map(|i| (q as u64).pow((m - 1 - i) as u32)).collect();
    let mut x = vec![0 as Symbol; n];
    let mut y = map.eval(&x);
    let mut idx: u64 = y.iter().zip(&weights).map(|(&v, &w)| v as u64 * w).sum();
    let mut seen = FixedBitSet::with_capacity(outputs as usize);
    seen.insert(idx as usize);
    let mut touched = vec![false; m];
    let mut dirty = Vec::with_capacity(m);
    for _ in 1..inputs {
        // increment the big-endian odometer; the last digit is the fastest
        let mut p = n;
        loop {
            p -= 1;
            x[p] += 1;
            let wrapped = x[p] == q;
            if wrapped {
                x[p] = 0;
            }
            for &i in &dependents[p] {
                if !std::mem::replace(&mut touched[i], true) {
                    dirty.push(i);
                }
            }
            if !wrapped {
                break;
            }
        }
        for i in dirty.drain(..) {
            touched[i] = false;
            let v = map.eval_target(i, &x);
            if v != y[i] {
                idx = idx + v as u64 * weights[i] - y[i] as u64 * weights[i];
                y[i] = v;
            }
        }
        seen.insert(idx as usize);
    }
    Ok(seen.count_ones(..) as u64)
}

/// `|Z_{B(w,R)}|`: distinct restrictions of `Phi(x)` to the block, over all
/// patterns on the inputs the block reads.
fn block_count(map: &LiftedMap, block: &[usize]) -> Result<u64> {
    let q = map.alphabet().size();
    let rows: Vec<usize> = block
        .iter()
        .map(|v| map.targets().binary_search(v).map_err(|_| Error::Graph(format!("block vertex {v} is not a target"))))
        .collect::<Result<_>>()?;
    let mut cone: Vec<usize> = rows.iter().flat_map(|&i| map.taps(i).iter().copied()).collect();
    cone.sort_unstable();
    cone.dedup();
    let total = map.alphabet().pow(cone.len()).filter(|&t| t <= BLOCK_CAP).ok_or(Error::TooLarge {
        entries: u128::MAX,
        cap: BLOCK_CAP,
    })?;
    let mut x = vec![0; map.domain().len()];
    let mut local = vec![0; cone.len()];
    let mut seen = std::collections::HashSet::new();
    for idx in 0..total as usize {
        decode_index(q, idx, &mut local);
        for (&p, &v) in cone.iter().zip(&local) {
            x[p] = v;
        }
        let out: Vec<Symbol> = rows.iter().map(|&i| map.eval_target(i, &x)).collect();
        seen.insert(out);
    }
    Ok(seen.len() as u64)
}

/// Runs the counting chain for `s` lifted to the setup's graph.
///
/// Block counts are taken on `Phi` into `V(2R)`; the image count uses the
/// requested target and is skipped when it exceeds the caps.
pub fn counting_experiment(setup: &SoficSetup, s: &RuleField, target: Target) -> Result<CountingReport> {
    let q = s.alphabet().size();
    let ln_q = (q as f64).ln();
    let group = &setup.group;
    let ball_big = group.ball_elements(setup.big_r);
    let ball_2big = group.ball_elements(2 * setup.big_r).len();
    let b1 = ball_big.len();
    let gamma_total = s
        .alphabet()
        .pow(b1)
        .and_then(|t| u64::try_from(t).ok())
        .ok_or(Error::TooLarge { entries: u128::MAX, cap: u64::MAX as u128 })?;
    let gamma = check_surjectivity_window(group, s, &ball_big)?.count as u64;

    let phi_2 = LiftedMap::phi(setup, s, false)?;
    let blocks: Vec<u64> =
        setup.packing.balls.iter().map(|b| block_count(&phi_2, b)).collect::<Result<_>>()?;
    let counted = match target {
        Target::V2R => phi_2.clone(),
        Target::V3R => LiftedMap::phi(setup, s, true)?,
    };
    let image = match count_image(&counted) {
        Ok(n) => Some(n),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let image_total = s.alphabet().pow(counted.targets().len()).unwrap_or(u128::MAX);

    let w = setup.packing.centers.len();
    let packed = setup.packing.union();
    let v2 = setup.v_2big.len();
    let v3 = setup.v_3big.len();
    let outside = setup.v_2big.vertices().iter().filter(|v| packed.binary_search(v).is_err()).count();
    let partition_identity = v2 == w * b1 + outside;
    let cover_bound = w * ball_2big >= v3;

    let deficit = if q > 1 { (-(q as f64).powi(-(b1 as i32))).ln_1p() } else { 0.0 };
    let epsilon_post_surjective = if q > 1 { (-deficit / (2.0 * ball_2big as f64 * ln_q)).min(0.5) } else { 0.5 };
    let epsilon_injective = if q > 1 {
        let b2 = ball_2big as f64 * ln_q;
        1.0 - b2 / (b2 - deficit)
    } else {
        0.0
    };

    let mut inequalities = vec![Inequality::le("|Gamma_B(R)| <= |A|^|B(R)| - 1", gamma as f64, gamma_total as f64 - 1.0)];
    for (c, b) in setup.packing.centers.iter().zip(&blocks) {
        inequalities.push(Inequality::le(&format!("|Z_B({c},R)| <= |A|^|B(R)| - 1"), *b as f64, gamma_total as f64 - 1.0));
    }
    if let (Some(z), Target::V2R) = (image, target) {
        let log_z = (z as f64).ln();
        let block_sum: f64 = blocks.iter().map(|&b| (b as f64).ln()).sum::<f64>() + outside as f64 * ln_q;
        let bound = v2 as f64 * ln_q + w as f64 * deficit;
        inequalities.push(Inequality::le("log|Z| <= sum log|Z_B| + |V(2R) \\ W| log|A|", log_z, block_sum));
        inequalities.push(Inequality::le("sum log|Z_B| + |V(2R) \\ W| log|A| <= |V(2R)| log|A| + |W| log(1 - |A|^-|B(R)|)", block_sum, bound));
        inequalities.push(Inequality::le("|V(3R)| log|A| <= log|Z|", v3 as f64 * ln_q, log_z));
    }
    if let (Some(z), Target::V3R) = (image, target) {
        let upper = (setup.v_big.len() - packed.len()) as f64 * ln_q + w as f64 * ((gamma_total as f64) - 1.0).max(1.0).ln();
        inequalities.push(Inequality::le("log|Phi(A^V(R))| <= |V(R) \\ W| log|A| + |W| log(|A|^|B(R)| - 1)", (z as f64).ln(), upper));
        inequalities.push(Inequality::le("|V(3R)| log|A| <= log|Phi(A^V(R))|", v3 as f64 * ln_q, (z as f64).ln()));
    }
    Ok(CountingReport {
        r: setup.r,
        big_r: setup.big_r,
        alphabet: q,
        vertices: setup.graph.vertex_count(),
        v_r: setup.v_r.len(),
        v_big: setup.v_big.len(),
        v_2big: v2,
        v_3big: v3,
        ball_big: b1,
        ball_2big,
        centers: setup.packing.centers.clone(),
        packed: packed.len(),
        gamma,
        gamma_total,
        blocks_match_gamma: blocks.iter().all(|&b| b == gamma),
        block_deficit: blocks.iter().all(|&b| b < gamma_total),
        blocks,
        target,
        image,
        image_total,
        partition_identity,
        cover_bound,
        epsilon_post_surjective,
        epsilon_injective,
        inequalities,
    })
}
