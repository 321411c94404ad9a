//! Transformation operators on cluster orders.
//!
//! Every operator is split in two: a sampler that draws a [`Move`] from the
//! rng, and [`apply_move`], which builds the new tour and updates its cost
//! from the edges the move actually touched. Order and choice are permuted
//! together, so vertex choices travel with their clusters.
//!
//! Positions are cyclic; position 0 has no special role.

use rand::Rng;

use crate::instance::Instance;
use crate::neighbor::NeighborModel;
use crate::tour::Tour;

/// Attempts made before a guided sampler gives up on finding a usable
/// neighbor pair.
pub const GUIDE_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Swap,
    Shift,
    Symmetry,
    Circle,
}

/// Which of the two arcs of a circle move gets broken open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arc {
    /// Positions `cut_a + 1 ..= cut_b`.
    First,
    /// Positions `cut_b + 1 ..= cut_a`.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveParams {
    /// `new[positions[i]] = old[positions[perm[i]]]`.
    Swap {
        positions: Vec<usize>,
        perm: Vec<usize>,
    },
    /// Moves `len` positions starting at `start` to follow old position
    /// `after`.
    Shift {
        start: usize,
        len: usize,
        after: usize,
    },
    /// Mirrors the `2 * half + 1` positions centered on `center`.
    Symmetry { center: usize, half: usize },
    /// Cuts the edges leaving `cut_a` and `cut_b`, closing two circles.
    /// The `broken` one is opened before its element `break_at`, optionally
    /// reversed, and spliced into the other one before its element
    /// `insert_at`.
    Circle {
        cut_a: usize,
        cut_b: usize,
        broken: Arc,
        break_at: usize,
        insert_at: usize,
        reversed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub params: MoveParams,
    /// Positions were derived from a K-Neighbor pair.
    pub guided: bool,
}

impl Move {
    pub fn unguided(params: MoveParams) -> Self {
        Move {
            params,
            guided: false,
        }
    }

    pub fn kind(&self) -> MoveKind {
        match self.params {
            MoveParams::Swap { .. } => MoveKind::Swap,
            MoveParams::Shift { .. } => MoveKind::Shift,
            MoveParams::Symmetry { .. } => MoveKind::Symmetry,
            MoveParams::Circle { .. } => MoveKind::Circle,
        }
    }
}

/// A transformed tour plus the positions whose adjacency changed, which is
/// what short CO needs to know.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub tour: Tour,
    pub changed: Vec<usize>,
}

#[inline]
fn wrap(i: isize, m: usize) -> usize {
    i.rem_euclid(m as isize) as usize
}

/// Contiguous run of old positions, copied forward or reversed.
#[derive(Debug, Clone, Copy)]
struct Piece {
    start: usize,
    len: usize,
    rev: bool,
}

impl Piece {
    fn head(&self, m: usize) -> usize {
        if self.rev {
            (self.start + self.len - 1) % m
        } else {
            self.start
        }
    }

    fn tail(&self, m: usize) -> usize {
        if self.rev {
            self.start
        } else {
            (self.start + self.len - 1) % m
        }
    }
}

/// Reassembles the cycle from pieces that partition it into arcs. The cost
/// delta is the new junction edges minus the old edges leaving each arc.
/// The result is rotated so the old position-0 cluster stays first.
fn assemble(inst: &Instance, t: &Tour, pieces: &[Piece]) -> Candidate {
    let m = t.len();
    let mut order = Vec::with_capacity(m);
    let mut choice = Vec::with_capacity(m);
    let mut ends = Vec::with_capacity(2 * pieces.len());
    let mut removed = 0;
    let mut added = 0;
    for (k, p) in pieces.iter().enumerate() {
        removed += t.edge_after(inst, (p.start + p.len - 1) % m);
        let next = &pieces[(k + 1) % pieces.len()];
        added += inst.cost_idx(t.choice[p.tail(m)], t.choice[next.head(m)]);
        ends.push(order.len());
        for i in 0..p.len {
            let pos = if p.rev {
                (p.start + p.len - 1 - i) % m
            } else {
                (p.start + i) % m
            };
            order.push(t.order[pos]);
            choice.push(t.choice[pos]);
        }
        ends.push(order.len() - 1);
    }
    debug_assert_eq!(order.len(), m);
    let first = t.order[0];
    let shift = order.iter().position(|&c| c == first).unwrap();
    order.rotate_left(shift);
    choice.rotate_left(shift);
    let mut changed: Vec<usize> = ends.into_iter().map(|e| (e + m - shift) % m).collect();
    changed.sort_unstable();
    changed.dedup();
    Candidate {
        tour: Tour {
            order,
            choice,
            cost: t.cost + added - removed,
        },
        changed,
    }
}

/// Applies an in-place position permutation given as `(position, source)`
/// pairs. Only the edges incident to rewritten positions are re-costed.
fn permute_in_place(inst: &Instance, t: &Tour, moves: &[(usize, usize)]) -> Candidate {
    let m = t.len();
    let mut edges: Vec<usize> = moves
        .iter()
        .flat_map(|&(p, _)| [(p + m - 1) % m, p])
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let before: i64 = edges.iter().map(|&e| t.edge_after(inst, e)).sum();
    let mut out = t.clone();
    for &(p, src) in moves {
        out.order[p] = t.order[src];
        out.choice[p] = t.choice[src];
    }
    let after: i64 = edges.iter().map(|&e| out.edge_after(inst, e)).sum();
    out.cost = t.cost + after - before;
    let mut changed: Vec<usize> = moves.iter().map(|&(p, _)| p).collect();
    changed.sort_unstable();
    Candidate { tour: out, changed }
}

fn arc_positions(from: usize, len: usize, m: usize) -> impl Iterator<Item = usize> {
    (0..len).map(move |i| (from + i) % m)
}

/// Builds the candidate described by `mv`.
pub fn apply_move(inst: &Instance, t: &Tour, mv: &Move) -> Candidate {
    let m = t.len();
    match &mv.params {
        MoveParams::Swap { positions, perm } => {
            let moves: Vec<(usize, usize)> = positions
                .iter()
                .zip(perm)
                .map(|(&p, &k)| (p, positions[k]))
                .collect();
            permute_in_place(inst, t, &moves)
        }
        MoveParams::Symmetry { center, half } => {
            let w = 2 * half + 1;
            let lo = wrap(*center as isize - *half as isize, m);
            let window: Vec<usize> = arc_positions(lo, w, m).collect();
            let moves: Vec<(usize, usize)> =
                (0..w).map(|j| (window[j], window[w - 1 - j])).collect();
            let mut c = permute_in_place(inst, t, &moves);
            c.changed = vec![window[0], window[w - 1]];
            c.changed.sort_unstable();
            c
        }
        MoveParams::Shift { .. } | MoveParams::Circle { .. } => {
            assemble(inst, t, &pieces_for(m, &mv.params))
        }
    }
}

/// Arc decomposition of a shift or circle move, in new cycle order.
fn pieces_for(m: usize, params: &MoveParams) -> Vec<Piece> {
    let mut pieces = match params {
        MoveParams::Shift { start, len, after } => {
            let rest_start = (start + len) % m;
            let rest_len = m - len;
            // offset of `after` within the remaining arc
            let j = (after + m - rest_start) % m;
            debug_assert!(j + 1 < rest_len, "shift back to its own slot");
            vec![
                Piece {
                    start: rest_start,
                    len: j + 1,
                    rev: false,
                },
                Piece {
                    start: *start,
                    len: *len,
                    rev: false,
                },
                Piece {
                    start: (rest_start + j + 1) % m,
                    len: rest_len - j - 1,
                    rev: false,
                },
            ]
        }
        MoveParams::Circle {
            cut_a,
            cut_b,
            broken,
            break_at,
            insert_at,
            reversed,
        } => {
            let first_start = (cut_a + 1) % m;
            let first_len = (cut_b + m - cut_a) % m;
            let second_start = (cut_b + 1) % m;
            let second_len = m - first_len;
            let ((b_start, b_len), (a_start, a_len)) = match broken {
                Arc::First => ((first_start, first_len), (second_start, second_len)),
                Arc::Second => ((second_start, second_len), (first_start, first_len)),
            };
            let mut path = vec![
                Piece {
                    start: (b_start + break_at) % m,
                    len: b_len - break_at,
                    rev: false,
                },
                Piece {
                    start: b_start,
                    len: *break_at,
                    rev: false,
                },
            ];
            if *reversed {
                path.reverse();
                for p in &mut path {
                    p.rev = true;
                }
            }
            let mut pieces = vec![Piece {
                start: a_start,
                len: *insert_at,
                rev: false,
            }];
            pieces.extend(path);
            pieces.push(Piece {
                start: (a_start + insert_at) % m,
                len: a_len - insert_at,
                rev: false,
            });
            pieces
        }
        _ => unreachable!("in-place moves have no arc decomposition"),
    };
    pieces.retain(|p| p.len > 0);
    pieces
}

/// True when `a` and `b` describe the same undirected cycle.
pub fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    let m = a.len();
    if m != b.len() {
        return false;
    }
    if m == 0 {
        return true;
    }
    let Some(k) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    let forward = (0..m).all(|i| a[i] == b[(k + i) % m]);
    forward || (0..m).all(|i| a[i] == b[(k + m - i) % m])
}

/// Draws an unguided swap. Exchanges between 2 and `max(2, m_a)` distinct
/// positions (never more than `m`) under a random derangement.
pub fn sample_swap<R: Rng + ?Sized>(m: usize, m_a: usize, rng: &mut R) -> Move {
    assert!(m >= 2, "swap needs at least two clusters");
    let hi = m_a.max(2).min(m);
    let count = rng.random_range(2..=hi);
    let positions = rand::seq::index::sample(rng, m, count).into_vec();
    let perm = if count == 2 {
        vec![1, 0]
    } else {
        loop {
            let mut p: Vec<usize> = (0..count).collect();
            rand::seq::SliceRandom::shuffle(p.as_mut_slice(), rng);
            if p.iter().enumerate().all(|(i, &x)| i != x) {
                break p;
            }
        }
    };
    Move::unguided(MoveParams::Swap { positions, perm })
}

/// Draws an unguided shift of a segment of 1 to `m_b` clusters.
pub fn sample_shift<R: Rng + ?Sized>(m: usize, m_b: usize, rng: &mut R) -> Move {
    assert!(m >= 3, "shift needs at least three clusters");
    let len = rng.random_range(1..=m_b.max(1).min(m - 2));
    let start = rng.random_range(0..m);
    // Slot m - len - 1 of the remaining arc is the segment's own position.
    let j = rng.random_range(0..m - len - 1);
    let after = (start + len + j) % m;
    Move::unguided(MoveParams::Shift { start, len, after })
}

/// Draws an unguided symmetry with half-length 1 to `m_c`.
pub fn sample_symmetry<R: Rng + ?Sized>(m: usize, m_c: usize, rng: &mut R) -> Move {
    let max_half = m_c.max(1).min((m.saturating_sub(1)) / 2);
    assert!(max_half >= 1, "symmetry needs at least three clusters");
    let half = rng.random_range(1..=max_half);
    let center = rng.random_range(0..m);
    Move::unguided(MoveParams::Symmetry { center, half })
}

fn circle_is_noop(m: usize, params: &MoveParams) -> bool {
    let layout: Vec<usize> = pieces_for(m, params)
        .iter()
        .flat_map(|p| {
            (0..p.len).map(move |i| {
                if p.rev {
                    (p.start + p.len - 1 - i) % m
                } else {
                    (p.start + i) % m
                }
            })
        })
        .collect();
    let ident: Vec<usize> = (0..m).collect();
    same_cycle(&ident, &layout)
}

/// Draws an unguided circle move covering all split/break/insert choices
/// uniformly by position. Moves that reproduce the same cycle are redrawn.
pub fn sample_circle<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Move {
    assert!(m >= 4, "circle needs at least four clusters");
    loop {
        let cut_a = rng.random_range(0..m);
        let cut_b = (cut_a + rng.random_range(1..m)) % m;
        let first_len = (cut_b + m - cut_a) % m;
        let broken = if rng.random_bool(0.5) {
            Arc::First
        } else {
            Arc::Second
        };
        let (b_len, a_len) = match broken {
            Arc::First => (first_len, m - first_len),
            Arc::Second => (m - first_len, first_len),
        };
        let params = MoveParams::Circle {
            cut_a,
            cut_b,
            broken,
            break_at: rng.random_range(0..b_len),
            insert_at: rng.random_range(0..a_len),
            reversed: rng.random_bool(0.5),
        };
        if !circle_is_noop(m, &params) {
            return Move::unguided(params);
        }
    }
}

/// Samples a cluster `u` uniformly, then `v` uniformly from its K-Neighbor
/// list, and returns their positions in `t`. Pairs already adjacent in the
/// tour are redrawn; gives up after [`GUIDE_ATTEMPTS`] draws.
pub fn guided_positions<R: Rng + ?Sized>(
    t: &Tour,
    nm: &NeighborModel,
    positions: &[usize],
    rng: &mut R,
) -> Option<(usize, usize)> {
    let m = t.len();
    if m < 4 {
        return None;
    }
    for _ in 0..GUIDE_ATTEMPTS {
        let u = rng.random_range(0..m);
        let list = nm.neighbors(u);
        if list.is_empty() {
            continue;
        }
        let v = list[rng.random_range(0..list.len())];
        let (pu, pv) = (positions[u], positions[v]);
        if pv == t.next(pu) || pu == t.next(pv) {
            continue;
        }
        return Some((pu, pv));
    }
    None
}

/// Shift that places the segment starting (or ending) at `u` right next to
/// its neighbor `v`.
pub fn sample_k_shift<R: Rng + ?Sized>(
    t: &Tour,
    nm: &NeighborModel,
    m_b: usize,
    rng: &mut R,
) -> Option<Move> {
    let m = t.len();
    let positions = t.positions();
    let (pu, pv) = guided_positions(t, nm, &positions, rng)?;
    let mut len = rng.random_range(1..=m_b.max(1).min(m - 2));
    let forward = (pv + m - pu) % m;
    let backward = m - forward;
    let params = if rng.random_bool(0.5) {
        // [u ...] inserted right after v
        len = len.min(forward);
        MoveParams::Shift {
            start: pu,
            len,
            after: pv,
        }
    } else {
        // [... u] inserted right before v
        len = len.min(backward);
        MoveParams::Shift {
            start: (pu + m + 1 - len) % m,
            len,
            after: (pv + m - 1) % m,
        }
    };
    Some(Move {
        params,
        guided: true,
    })
}

/// Symmetry whose reversed window creates the edge `u`-`v`. Only windows of
/// odd length between 3 and `2 * m_c + 1` qualify.
pub fn sample_k_symmetry<R: Rng + ?Sized>(
    t: &Tour,
    nm: &NeighborModel,
    m_c: usize,
    rng: &mut R,
) -> Option<Move> {
    let m = t.len();
    let positions = t.positions();
    let max_w = 2 * m_c.max(1) + 1;
    for _ in 0..GUIDE_ATTEMPTS {
        let (pu, pv) = guided_positions(t, nm, &positions, rng)?;
        let forward = (pv + m - pu) % m;
        let backward = m - forward;
        // (window start, window length)
        let options = [
            ((pu + 1) % m, forward),
            (pu, forward),
            ((pv + 1) % m, backward),
            (pv, backward),
        ];
        let ok: Vec<(usize, usize)> = options
            .into_iter()
            .filter(|&(_, w)| w >= 3 && w % 2 == 1 && w <= max_w && w < m)
            .collect();
        if ok.is_empty() {
            continue;
        }
        let (lo, w) = ok[rng.random_range(0..ok.len())];
        let half = (w - 1) / 2;
        return Some(Move {
            params: MoveParams::Symmetry {
                center: (lo + half) % m,
                half,
            },
            guided: true,
        });
    }
    None
}

/// Circle move that separates `u` from its neighbor `v`, opens `u`'s circle
/// next to `u` and splices it in beside `v`.
pub fn sample_k_circle<R: Rng + ?Sized>(t: &Tour, nm: &NeighborModel, rng: &mut R) -> Option<Move> {
    let m = t.len();
    let positions = t.positions();
    for _ in 0..GUIDE_ATTEMPTS {
        let (pu, pv) = guided_positions(t, nm, &positions, rng)?;
        let forward = (pv + m - pu) % m;
        let backward = m - forward;
        // one cut on each side between u and v
        let cut_a = (pu + rng.random_range(0..forward)) % m;
        let cut_b = (pv + rng.random_range(0..backward)) % m;
        // arc First = cut_a+1..=cut_b holds v; arc Second holds u
        let b_start = (cut_b + 1) % m;
        let b_len = (cut_a + m - cut_b) % m;
        let a_start = (cut_a + 1) % m;
        let a_len = m - b_len;
        let iu = (pu + m - b_start) % m;
        let iv = (pv + m - a_start) % m;
        let (break_at, reversed, insert_at) = match rng.random_range(0..4) {
            0 => (iu, false, (iv + 1) % a_len),
            1 => ((iu + 1) % b_len, true, (iv + 1) % a_len),
            2 => ((iu + 1) % b_len, false, iv),
            _ => (iu, true, iv),
        };
        let params = MoveParams::Circle {
            cut_a,
            cut_b,
            broken: Arc::Second,
            break_at,
            insert_at,
            reversed,
        };
        if !circle_is_noop(m, &params) {
            return Some(Move {
                params,
                guided: true,
            });
        }
    }
    None
}

/// Random swap applied to `t`.
pub fn swap_move<R: Rng + ?Sized>(inst: &Instance, t: &Tour, m_a: usize, rng: &mut R) -> Candidate {
    apply_move(inst, t, &sample_swap(t.len(), m_a, rng))
}

/// Random shift applied to `t`.
pub fn shift_move<R: Rng + ?Sized>(
    inst: &Instance,
    t: &Tour,
    m_b: usize,
    rng: &mut R,
) -> Candidate {
    apply_move(inst, t, &sample_shift(t.len(), m_b, rng))
}

/// Random symmetry applied to `t`.
pub fn symmetry_move<R: Rng + ?Sized>(
    inst: &Instance,
    t: &Tour,
    m_c: usize,
    rng: &mut R,
) -> Candidate {
    apply_move(inst, t, &sample_symmetry(t.len(), m_c, rng))
}

/// Random circle move applied to `t`.
pub fn circle_move<R: Rng + ?Sized>(inst: &Instance, t: &Tour, rng: &mut R) -> Candidate {
    apply_move(inst, t, &sample_circle(t.len(), rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::WeightKind;
    use crate::tour::is_valid_tour;

    fn ring(m: usize) -> Instance {
        let coords = (0..m)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / m as f64;
                (1000.0 * a.cos(), 1000.0 * a.sin())
            })
            .collect();
        Instance::from_coords(
            "ring",
            WeightKind::Euc2d,
            coords,
            (0..m).map(|i| vec![i]).collect(),
        )
        .unwrap()
    }

    fn ident(inst: &Instance) -> Tour {
        Tour::with_first_vertices(inst, (0..inst.m()).collect()).unwrap()
    }

    fn seq(c: &Candidate) -> Vec<usize> {
        c.tour.cluster_sequence()
    }

    #[test]
    fn swap_matches_worked_example() {
        let inst = ring(5);
        let mv = Move::unguided(MoveParams::Swap {
            positions: vec![2, 4],
            perm: vec![1, 0],
        });
        let c = apply_move(&inst, &ident(&inst), &mv);
        assert_eq!(seq(&c), vec![1, 2, 5, 4, 3]);
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn shift_matches_pattern() {
        let inst = ring(5);
        let mv = Move::unguided(MoveParams::Shift {
            start: 1,
            len: 1,
            after: 3,
        });
        let c = apply_move(&inst, &ident(&inst), &mv);
        assert_eq!(seq(&c), vec![1, 3, 4, 2, 5]);
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn symmetry_matches_pattern() {
        let inst = ring(5);
        let mv = Move::unguided(MoveParams::Symmetry { center: 2, half: 1 });
        let c = apply_move(&inst, &ident(&inst), &mv);
        assert_eq!(seq(&c), vec![1, 4, 3, 2, 5]);
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn full_window_symmetry_keeps_cost() {
        let inst = ring(5);
        let t = ident(&inst);
        let mv = Move::unguided(MoveParams::Symmetry { center: 3, half: 2 });
        let c = apply_move(&inst, &t, &mv);
        assert_ne!(c.tour.order(), t.order());
        assert_eq!(c.tour.cost(), t.cost());
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn circle_single_vertex_reinsertion() {
        let inst = ring(6);
        // circles {3} and {4,5,6,1,2}; 3 goes between 5 and 6
        let mv = Move::unguided(MoveParams::Circle {
            cut_a: 1,
            cut_b: 2,
            broken: Arc::First,
            break_at: 0,
            insert_at: 2,
            reversed: false,
        });
        let c = apply_move(&inst, &ident(&inst), &mv);
        assert_eq!(seq(&c), vec![1, 2, 4, 5, 3, 6]);
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn circle_interface_rejoin_reverses_segment() {
        let inst = ring(6);
        // circles {2,3,4} and {5,6,1}; reopen the first at its interface
        // and put it back reversed
        let mv = Move::unguided(MoveParams::Circle {
            cut_a: 0,
            cut_b: 3,
            broken: Arc::First,
            break_at: 0,
            insert_at: 0,
            reversed: true,
        });
        let c = apply_move(&inst, &ident(&inst), &mv);
        assert!(same_cycle(&c.tour.cluster_sequence(), &[1, 4, 3, 2, 5, 6]));
        assert!(is_valid_tour(&inst, &c.tour).is_ok());
    }

    #[test]
    fn same_cycle_detects_rotation_and_reflection() {
        assert!(same_cycle(&[0, 1, 2, 3], &[2, 3, 0, 1]));
        assert!(same_cycle(&[0, 1, 2, 3], &[3, 2, 1, 0]));
        assert!(!same_cycle(&[0, 1, 2, 3], &[0, 2, 1, 3]));
    }

    #[test]
    fn swap_sizes_follow_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        use rand::SeedableRng;
        for _ in 0..200 {
            let mv = sample_swap(10, 4, &mut rng);
            let MoveParams::Swap { positions, perm } = mv.params else {
                unreachable!()
            };
            assert!((2..=4).contains(&positions.len()));
            assert!(perm.iter().enumerate().all(|(i, &p)| i != p));
            let mut p = positions.clone();
            p.sort_unstable();
            p.dedup();
            assert_eq!(p.len(), positions.len());
        }
    }
}
