//! Local configurations next to a large blowup that force an eye.
//!
//! Given the parts of a blowup of `τ(0,a)` (blue inside, green across) or of
//! `τ(b-1,0)` (red inside, green across), these checks look for a single
//! outside vertex or an outside pair whose neighbourhoods in the parts
//! already complete a copy of `I_{a,b}`. Every reported violation carries an
//! explicit embedding that has been checked against the graph.

use serde::{Deserialize, Serialize};

use rand_core::RngCore;

use crate::error::{invalid, Result};
use crate::igraph::{IGraph, PairColor};

use super::{Embedding, Pattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationSource {
    Vertex { z: usize },
    Edge { z: usize, z2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindViolation {
    pub source: ViolationSource,
    /// Index of the part hosting the large neighbourhood.
    pub part: usize,
    /// Embedding of `eye(a, b)` built from the configuration.
    pub witness: Embedding,
}

fn validate_parts(g: &IGraph, parts: &[Vec<usize>], count: usize, inside_red: bool) -> Result<Vec<bool>> {
    if parts.len() != count {
        return Err(invalid(format!("expected {count} parts, got {}", parts.len())));
    }
    let mut in_p = vec![false; g.n()];
    for part in parts {
        if part.is_empty() {
            return Err(invalid("empty blowup part"));
        }
        for &v in part {
            if v >= g.n() || in_p[v] {
                return Err(invalid(format!("vertex {v} repeated or out of range")));
            }
            in_p[v] = true;
        }
    }
    for (i, pi) in parts.iter().enumerate() {
        for (x, &u) in pi.iter().enumerate() {
            for &v in &pi[x + 1..] {
                let c = g.color(u, v);
                let ok = if inside_red { c.in_red() } else { c.in_blue() };
                if !ok {
                    return Err(invalid(format!("pair ({u},{v}) inside part {i} has colour {c:?}")));
                }
            }
        }
        for pj in &parts[i + 1..] {
            for &u in pi {
                for &v in pj {
                    if g.color(u, v) != PairColor::Green {
                        return Err(invalid(format!("cross pair ({u},{v}) is not green")));
                    }
                }
            }
        }
    }
    Ok(in_p)
}

fn red_common(g: &IGraph, zs: &[usize], part: &[usize]) -> Vec<usize> {
    part.iter().copied().filter(|&y| zs.iter().all(|&z| g.color(z, y).in_red())).collect()
}

fn blue_common(g: &IGraph, zs: &[usize], part: &[usize]) -> Vec<usize> {
    part.iter().copied().filter(|&y| zs.iter().all(|&z| g.color(z, y).in_blue())).collect()
}

/// Assembles an embedding of `eye(a,b)`: red clique first, then blue clique.
fn witness(g: &IGraph, a: usize, b: usize, red: Vec<usize>, blue: Vec<usize>) -> Embedding {
    debug_assert_eq!(red.len(), a);
    debug_assert_eq!(blue.len(), b);
    let mut map = red;
    map.extend(blue);
    let emb = Embedding { map };
    let eye = Pattern::eye(a, b).expect("valid eye");
    assert!(emb.is_valid(g, &eye), "constructed witness is not an embedding");
    emb
}

/// Forbidden configurations next to a blowup of `τ(0,a)` with parts `P_1..P_a`.
pub fn check_find_ia(g: &IGraph, parts: &[Vec<usize>], a: usize, b: usize) -> Result<Option<FindViolation>> {
    Pattern::eye(a, b)?;
    let in_p = validate_parts(g, parts, a, false)?;
    let outside: Vec<usize> = (0..g.n()).filter(|&v| !in_p[v]).collect();

    for &z in &outside {
        let nbrs: Vec<Vec<usize>> = parts.iter().map(|p| red_common(g, &[z], p)).collect();
        if nbrs.iter().any(Vec::is_empty) {
            continue;
        }
        if let Some(j) = nbrs.iter().position(|s| s.len() >= b) {
            let mut red = vec![z];
            red.extend((0..a).filter(|&i| i != j).map(|i| nbrs[i][0]));
            let blue = nbrs[j][..b].to_vec();
            let w = witness(g, a, b, red, blue);
            return Ok(Some(FindViolation { source: ViolationSource::Vertex { z }, part: j, witness: w }));
        }
    }

    for (x, &z) in outside.iter().enumerate() {
        for &z2 in &outside[x + 1..] {
            if !g.color(z, z2).in_red() {
                continue;
            }
            let common: Vec<Vec<usize>> = parts.iter().map(|p| red_common(g, &[z, z2], p)).collect();
            for j in 0..a {
                if common[j].len() < b {
                    continue;
                }
                let empty: Vec<usize> = (0..a).filter(|&i| i != j && common[i].is_empty()).collect();
                if empty.len() > 1 {
                    continue;
                }
                // skip the empty part, or any other part when none is empty
                let skip = empty.first().copied().or_else(|| (0..a).find(|&i| i != j));
                let mut red = vec![z, z2];
                red.extend((0..a).filter(|&i| i != j && Some(i) != skip).map(|i| common[i][0]));
                if red.len() != a {
                    // a = 1: the pair itself is already too large a red clique
                    continue;
                }
                let blue = common[j][..b].to_vec();
                let w = witness(g, a, b, red, blue);
                return Ok(Some(FindViolation { source: ViolationSource::Edge { z, z2 }, part: j, witness: w }));
            }
        }
    }
    Ok(None)
}

/// Forbidden configurations next to a blowup of `τ(b-1,0)` with parts `P_1..P_{b-1}`.
pub fn check_find_ib(g: &IGraph, parts: &[Vec<usize>], a: usize, b: usize) -> Result<Option<FindViolation>> {
    Pattern::eye(a, b)?;
    let in_p = validate_parts(g, parts, b - 1, true)?;
    let outside: Vec<usize> = (0..g.n()).filter(|&v| !in_p[v]).collect();

    for &z in &outside {
        let blue: Vec<Vec<usize>> = parts.iter().map(|p| blue_common(g, &[z], p)).collect();
        if blue.iter().any(Vec::is_empty) {
            continue;
        }
        for j in 0..parts.len() {
            let red_j = red_common(g, &[z], &parts[j]);
            if red_j.len() < a + 1 {
                continue;
            }
            let picks: Vec<usize> = blue.iter().map(|s| s[0]).collect();
            let red: Vec<usize> = red_j.iter().copied().filter(|&y| y != picks[j]).take(a).collect();
            let mut bl = vec![z];
            bl.extend(picks);
            let w = witness(g, a, b, red, bl);
            return Ok(Some(FindViolation { source: ViolationSource::Vertex { z }, part: j, witness: w }));
        }
    }

    for (x, &z) in outside.iter().enumerate() {
        for &z2 in &outside[x + 1..] {
            if !g.color(z, z2).in_blue() {
                continue;
            }
            let blue: Vec<Vec<usize>> = parts.iter().map(|p| blue_common(g, &[z, z2], p)).collect();
            for j in 0..parts.len() {
                let red_j = red_common(g, &[z, z2], &parts[j]);
                if red_j.len() < a + 1 || blue[j].is_empty() {
                    continue;
                }
                let empty: Vec<usize> = (0..parts.len()).filter(|&i| i != j && blue[i].is_empty()).collect();
                if empty.len() > 1 {
                    continue;
                }
                let skip = empty.first().copied().or_else(|| (0..parts.len()).find(|&i| i != j));
                let yj = blue[j][0];
                let mut bl = vec![z, z2, yj];
                bl.extend((0..parts.len()).filter(|&i| i != j && Some(i) != skip).map(|i| blue[i][0]));
                if bl.len() != b {
                    // b = 2: z, z2 alone form the blue clique
                    bl.truncate(b);
                }
                let red: Vec<usize> = red_j.iter().copied().filter(|y| !bl.contains(y)).take(a).collect();
                let w = witness(g, a, b, red, bl);
                return Ok(Some(FindViolation { source: ViolationSource::Edge { z, z2 }, part: j, witness: w }));
            }
        }
    }
    Ok(None)
}

const THREE: [PairColor; 3] = [PairColor::Red, PairColor::Blue, PairColor::Green];

/// Blowup with `k` parts of size `t` (inside colour `inside`, green across)
/// followed by `extra` vertices with random colours.
fn instance(rng: &mut impl RngCore, k: usize, t: usize, inside: PairColor, extra: usize) -> (IGraph, Vec<Vec<usize>>) {
    let n = k * t + extra;
    let parts: Vec<Vec<usize>> = (0..k).map(|i| (i * t..(i + 1) * t).collect()).collect();
    let g = IGraph::from_fn(n, |u, v| {
        if u < k * t && v < k * t {
            if u / t == v / t {
                inside
            } else {
                PairColor::Green
            }
        } else {
            THREE[(rng.next_u32() % 3) as usize]
        }
    });
    (g, parts)
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub g: IGraph,
    pub parts: Vec<Vec<usize>>,
    pub a: usize,
    pub b: usize,
}

/// A blowup of `τ(0,a)` (`ia`) or `τ(b-1,0)` with two random outside
/// vertices, one or both of which are then wired into a forbidden
/// configuration. `a, b` are drawn from `{2, 3}`.
pub fn planted_violator(rng: &mut impl RngCore, ia: bool) -> PlantedInstance {
    let a = 2 + (rng.next_u32() % 2) as usize;
    let b = 2 + (rng.next_u32() % 2) as usize;
    let k = if ia { a } else { b - 1 };
    let t = if ia { b + 1 } else { a + 2 };
    let inside = if ia { PairColor::Blue } else { PairColor::Red };
    let (mut g, parts) = instance(rng, k, t, inside, 2);
    let (z, z2) = (k * t, k * t + 1);
    let j = (rng.next_u32() as usize) % k;
    let edge_case = rng.next_u32().is_multiple_of(2);
    // wire the configuration; all other outside pairs stay random
    for (i, part) in parts.iter().enumerate() {
        for (x, &y) in part.iter().enumerate() {
            let need = if ia {
                if i == j {
                    x < b
                } else {
                    x == 0 && !(edge_case && i == (j + 1) % k && k > 2)
                }
            } else {
                (i == j && x <= a) || x == t - 1
            };
            if !need {
                continue;
            }
            let c = if ia {
                PairColor::Red
            } else if i == j && x <= a {
                if x == 0 { PairColor::Green } else { PairColor::Red }
            } else {
                PairColor::Blue
            };
            g.set(z, y, c);
            if edge_case {
                g.set(z2, y, c);
            }
        }
    }
    if !ia {
        // a blue neighbour in the large part
        for &y in &parts[j][..1] {
            g.set(z, y, PairColor::Green);
            g.set(z2, y, PairColor::Green);
        }
    }
    if edge_case {
        g.set(z, z2, if ia { PairColor::Red } else { PairColor::Blue });
    }
    PlantedInstance { g, parts, a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::contains;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn plain_blowups_have_no_violation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, parts) = instance(&mut rng, 2, 4, PairColor::Blue, 0);
        assert_eq!(check_find_ia(&g, &parts, 2, 2).unwrap(), None);
        let (g, parts) = instance(&mut rng, 2, 4, PairColor::Red, 0);
        assert_eq!(check_find_ib(&g, &parts, 2, 3).unwrap(), None);
    }

    #[test]
    fn red_complete_vertex_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut g, parts) = instance(&mut rng, 3, 4, PairColor::Blue, 1);
        for v in 0..12 {
            g.set(12, v, PairColor::Red);
        }
        let hit = check_find_ia(&g, &parts, 3, 2).unwrap().expect("violation");
        assert_eq!(hit.source, ViolationSource::Vertex { z: 12 });
        assert!(contains(&g, &Pattern::eye(3, 2).unwrap()).is_some());
    }

    #[test]
    fn missing_part_blocks_vertex_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut g, parts) = instance(&mut rng, 2, 4, PairColor::Blue, 1);
        for v in 0..8 {
            g.set(8, v, if v < 4 { PairColor::Red } else { PairColor::Blue });
        }
        assert_eq!(check_find_ia(&g, &parts, 2, 2).unwrap(), None);
    }

    #[test]
    fn invalid_parts_rejected() {
        let g = IGraph::new(6, PairColor::Red);
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert!(check_find_ia(&g, &parts, 2, 2).is_err());
        assert!(check_find_ib(&g, &parts, 2, 3).is_err());
        assert!(check_find_ia(&g, &parts[..1], 2, 2).is_err());
    }

    fn planted_round(rng: &mut ChaCha8Rng, ia: bool) {
        let inst = planted_violator(rng, ia);
        let eye = Pattern::eye(inst.a, inst.b).unwrap();
        let found = if ia { check_find_ia(&inst.g, &inst.parts, inst.a, inst.b) } else { check_find_ib(&inst.g, &inst.parts, inst.a, inst.b) };
        let hit = found.unwrap().expect("planted configuration must be reported");
        assert!(hit.witness.is_valid(&inst.g, &eye));
        assert!(contains(&inst.g, &eye).is_some());
    }

    #[test]
    fn planted_violators_always_yield_an_eye() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for round in 0..1000 {
            planted_round(&mut rng, round % 2 == 0);
        }
    }
}
