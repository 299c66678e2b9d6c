//! Semi-infinite wedge monomials in particle/hole encoding.
//!
//! The basis vector `v^{(j)}_k` (with `k ∈ Z + 1/2`) sits at the integer slot
//! `s = n(k − 1/2) + j`, so the vacuum fills exactly the slots `s <= 0`.
//! A monomial is stored by its particles (occupied slots `> 0`) and holes
//! (empty slots `<= 0`); its canonical sign is the one of the wedge written in
//! strictly decreasing slot order.

use std::fmt;

use smallvec::SmallVec;

type Slots = SmallVec<[i32; 6]>;

/// Doubled mode `2k` and color of a slot.
pub fn decode_slot(n: usize, s: i32) -> (usize, i32) {
    let n = n as i32;
    let m = (s - 1).div_euclid(n);
    let j = (s - 1).rem_euclid(n) + 1;
    (j as usize, 2 * m + 1)
}

/// Slot of `v^{(color)}_k` with `k = k2 / 2` (`k2` odd).
pub fn slot(n: usize, color: usize, k2: i32) -> i32 {
    debug_assert!(k2 % 2 != 0, "modes are half-integers");
    debug_assert!(color >= 1 && color <= n);
    n as i32 * ((k2 - 1) / 2) + color as i32
}

/// A canonically ordered semi-infinite wedge monomial.
///
/// Ordering compares doubled energy first, which keeps vectors sorted by grade.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    energy2: i32,
    n: u8,
    particles: Slots,
    holes: Slots,
}

impl FockState {
    pub fn vacuum(n: usize) -> Self {
        assert!((1..=255).contains(&n));
        FockState {
            energy2: 0,
            n: n as u8,
            particles: Slots::new(),
            holes: Slots::new(),
        }
    }

    /// Builds a state from occupation data given as `(color, doubled mode)`.
    pub fn from_modes(n: usize, particles: &[(usize, i32)], holes: &[(usize, i32)]) -> Option<Self> {
        let mut st = FockState::vacuum(n);
        for &(c, k2) in holes {
            if k2 >= 0 || c == 0 || c > n {
                return None;
            }
            st = st.annihilate(slot(n, c, k2))?.1;
        }
        for &(c, k2) in particles {
            if k2 <= 0 || c == 0 || c > n {
                return None;
            }
            st = st.create(slot(n, c, k2))?.1;
        }
        Some(st)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Twice the energy.
    pub fn energy2(&self) -> i32 {
        self.energy2
    }

    pub fn particles(&self) -> &[i32] {
        &self.particles
    }

    pub fn holes(&self) -> &[i32] {
        &self.holes
    }

    pub fn is_vacuum(&self) -> bool {
        self.particles.is_empty() && self.holes.is_empty()
    }

    pub fn excitations(&self) -> usize {
        self.particles.len() + self.holes.len()
    }

    pub fn charge(&self, color: usize) -> i32 {
        let n = self.n();
        let count = |v: &[i32]| v.iter().filter(|&&s| decode_slot(n, s).0 == color).count() as i32;
        count(&self.particles) - count(&self.holes)
    }

    pub fn charges(&self) -> Vec<i32> {
        (1..=self.n()).map(|c| self.charge(c)).collect()
    }

    pub fn total_charge(&self) -> i32 {
        self.particles.len() as i32 - self.holes.len() as i32
    }

    pub fn is_occupied(&self, s: i32) -> bool {
        if s > 0 {
            self.particles.binary_search(&s).is_ok()
        } else {
            self.holes.binary_search(&s).is_err()
        }
    }

    /// Number of occupied slots strictly above `s`.
    fn occupied_above(&self, s: i32) -> usize {
        let above_p = self.particles.len() - self.particles.partition_point(|&p| p <= s);
        if s > 0 {
            above_p
        } else {
            let holes_above = self.holes.len() - self.holes.partition_point(|&h| h <= s);
            above_p + (-s) as usize - holes_above
        }
    }

    /// `v_s ∧ self`, normalized: `Some((negative, state))` or `None` if occupied.
    pub fn create(&self, s: i32) -> Option<(bool, FockState)> {
        if self.is_occupied(s) {
            return None;
        }
        let neg = self.occupied_above(s) % 2 == 1;
        let mut out = self.clone();
        if s > 0 {
            let pos = out.particles.partition_point(|&p| p < s);
            out.particles.insert(pos, s);
        } else {
            let pos = out.holes.binary_search(&s).expect("empty sea slot is a hole");
            out.holes.remove(pos);
        }
        out.energy2 += decode_slot(self.n(), s).1;
        Some((neg, out))
    }

    /// Contraction with `v_s^*`: `Some((negative, state))` or `None` if empty.
    pub fn annihilate(&self, s: i32) -> Option<(bool, FockState)> {
        if !self.is_occupied(s) {
            return None;
        }
        let neg = self.occupied_above(s) % 2 == 1;
        let mut out = self.clone();
        if s > 0 {
            let pos = out.particles.binary_search(&s).expect("occupied particle");
            out.particles.remove(pos);
        } else {
            let pos = out.holes.partition_point(|&h| h < s);
            out.holes.insert(pos, s);
        }
        out.energy2 -= decode_slot(self.n(), s).1;
        Some((neg, out))
    }

    /// Doubled modes of the particles and holes of one color, ascending.
    pub fn modes(&self, color: usize) -> (Vec<i32>, Vec<i32>) {
        let n = self.n();
        let pick = |v: &[i32]| {
            v.iter()
                .map(|&s| decode_slot(n, s))
                .filter(|(c, _)| *c == color)
                .map(|(_, k2)| k2)
                .collect::<Vec<_>>()
        };
        (pick(&self.particles), pick(&self.holes))
    }
}

fn half(k2: i32) -> String {
    format!("{k2}/2")
}

impl fmt::Display for FockState {
    /// `c1:p[1/2],h[-3/2];c2:-`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..=self.n())
            .map(|c| {
                let (p, h) = self.modes(c);
                let mut items = Vec::new();
                if !p.is_empty() {
                    items.push(format!("p[{}]", p.iter().map(|&k| half(k)).collect::<Vec<_>>().join(",")));
                }
                if !h.is_empty() {
                    items.push(format!("h[{}]", h.iter().map(|&k| half(k)).collect::<Vec<_>>().join(",")));
                }
                if items.is_empty() {
                    format!("c{c}:-")
                } else {
                    format!("c{c}:{}", items.join(","))
                }
            })
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} charge={:?} energy={}", self, self.charges(), half(self.energy2))
    }
}

/// Every basis state with doubled energy `<= e2max`, in canonical order.
pub fn enumerate_states(n: usize, e2max: i32) -> Vec<FockState> {
    // Per color: distinct positive odd doubled modes for particles and holes.
    fn subsets(max: i32, from: i32, acc: &mut Vec<i32>, out: &mut Vec<(Vec<i32>, i32)>, sum: i32) {
        out.push((acc.clone(), sum));
        let mut k = from;
        while sum + k <= max {
            acc.push(k);
            subsets(max, k + 2, acc, out, sum + k);
            acc.pop();
            k += 2;
        }
    }
    let mut sets = Vec::new();
    subsets(e2max, 1, &mut Vec::new(), &mut sets, 0);
    let mut per_color: Vec<(Vec<i32>, Vec<i32>, i32)> = Vec::new();
    for (p, ep) in &sets {
        for (h, eh) in &sets {
            if ep + eh <= e2max {
                per_color.push((p.clone(), h.clone(), ep + eh));
            }
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    fn rec(
        n: usize,
        color: usize,
        budget: i32,
        per_color: &[(Vec<i32>, Vec<i32>, i32)],
        choice: &mut Vec<usize>,
        out: &mut Vec<FockState>,
    ) {
        if color == n {
            let mut parts = Vec::new();
            let mut holes = Vec::new();
            for (c, &idx) in choice.iter().enumerate() {
                let (p, h, _) = &per_color[idx];
                parts.extend(p.iter().map(|&k| (c + 1, k)));
                holes.extend(h.iter().map(|&k| (c + 1, -k)));
            }
            out.push(FockState::from_modes(n, &parts, &holes).expect("valid modes"));
            return;
        }
        for (idx, (_, _, e)) in per_color.iter().enumerate() {
            if *e <= budget {
                choice[color] = idx;
                rec(n, color + 1, budget - e, per_color, choice, out);
            }
        }
    }
    rec(n, 0, e2max, &per_color, &mut choice, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_round_trip() {
        for n in 1..4 {
            for s in -20..20 {
                let (c, k2) = decode_slot(n, s);
                assert_eq!(slot(n, c, k2), s);
            }
        }
        assert_eq!(slot(2, 1, -1), -1);
        assert_eq!(slot(2, 2, -1), 0);
        assert_eq!(slot(2, 1, 1), 1);
    }

    #[test]
    fn debug_dump_format() {
        let st = FockState::from_modes(2, &[(1, 1)], &[(1, -3)]).unwrap();
        assert_eq!(st.to_string(), "c1:p[1/2],h[-3/2];c2:-");
        assert_eq!(st.energy2(), 4);
        assert_eq!(st.charges(), vec![0, 0]);
    }

    #[test]
    fn energy_bound_by_charge() {
        for st in enumerate_states(2, 8) {
            let c2: i32 = st.charges().iter().map(|c| c * c).sum();
            assert!(st.energy2() >= c2);
            assert!(st.energy2() <= 8);
        }
    }

    #[test]
    fn one_color_state_count() {
        // Charge-0 states of one color are counted by partitions of the energy.
        let states = enumerate_states(1, 12);
        let partitions = [1, 1, 2, 3, 5, 7, 11];
        for (e, p) in partitions.iter().enumerate() {
            let count = states
                .iter()
                .filter(|s| s.total_charge() == 0 && s.energy2() == 2 * e as i32)
                .count();
            assert_eq!(count, *p, "energy {e}");
        }
    }
}
