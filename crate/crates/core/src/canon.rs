//! Brute-force canonical labelling by branch and bound over relabelings.
//!
//! An object on `n` labelled points is encoded as a bit string read level by
//! level: level `k` holds the entries between point `k` and points `0..k`.
//! Every level only depends on the first `k + 1` points of a relabeling, so
//! prefixes can be compared while the permutation is being built. The
//! canonical form is the numerically smallest code over all `n!` relabelings.

pub(crate) trait LevelCode {
    fn points(&self) -> usize;
    /// Number of bits contributed by level `k`.
    fn level_width(&self, k: usize) -> u32;
    /// Bits of level `k` for the relabeling `perm[0..=k]`
    /// (new label `i` is old point `perm[i]`).
    fn level_bits(&self, perm: &[usize], k: usize) -> u64;
}

fn total_width<T: LevelCode>(obj: &T) -> u32 {
    (1..obj.points()).map(|k| obj.level_width(k)).sum()
}

/// Code of `obj` under relabeling `perm`.
pub(crate) fn code<T: LevelCode>(obj: &T, perm: &[usize]) -> u64 {
    let mut acc = 0u64;
    for k in 1..obj.points() {
        acc = (acc << obj.level_width(k)) | obj.level_bits(perm, k);
    }
    acc
}

/// Smallest code over all relabelings, with a permutation attaining it.
pub(crate) fn minimize<T: LevelCode>(obj: &T) -> (u64, Vec<usize>) {
    let n = obj.points();
    let identity: Vec<usize> = (0..n).collect();
    let mut best = (code(obj, &identity), identity);
    if n <= 1 {
        return best;
    }
    let total = total_width(obj);
    let mut perm = vec![0usize; n];
    search_min(obj, &mut perm, 0, 0, 0, 0, total, &mut best);
    best
}

#[allow(clippy::too_many_arguments)]
fn search_min<T: LevelCode>(
    obj: &T,
    perm: &mut Vec<usize>,
    k: usize,
    used: u64,
    prefix: u64,
    len: u32,
    total: u32,
    best: &mut (u64, Vec<usize>),
) {
    let n = obj.points();
    if k == n {
        if prefix < best.0 {
            *best = (prefix, perm.clone());
        }
        return;
    }
    for p in 0..n {
        if used >> p & 1 == 1 {
            continue;
        }
        perm[k] = p;
        let (next, next_len) = if k == 0 {
            (0, 0)
        } else {
            let w = obj.level_width(k);
            ((prefix << w) | obj.level_bits(perm, k), len + w)
        };
        let best_prefix = best.0 >> (total - next_len);
        if next > best_prefix {
            continue;
        }
        search_min(obj, perm, k + 1, used | 1 << p, next, next_len, total, best);
    }
}

/// True iff the identity labelling already attains the smallest code.
pub(crate) fn is_minimal<T: LevelCode>(obj: &T) -> bool {
    let n = obj.points();
    if n <= 1 {
        return true;
    }
    let identity: Vec<usize> = (0..n).collect();
    let own = code(obj, &identity);
    let total = total_width(obj);
    let mut perm = vec![0usize; n];
    !search_smaller(obj, &mut perm, 0, 0, 0, 0, total, own)
}

#[allow(clippy::too_many_arguments)]
fn search_smaller<T: LevelCode>(
    obj: &T,
    perm: &mut Vec<usize>,
    k: usize,
    used: u64,
    prefix: u64,
    len: u32,
    total: u32,
    own: u64,
) -> bool {
    let n = obj.points();
    if k == n {
        return false;
    }
    for p in 0..n {
        if used >> p & 1 == 1 {
            continue;
        }
        perm[k] = p;
        let (next, next_len) = if k == 0 {
            (0, 0)
        } else {
            let w = obj.level_width(k);
            ((prefix << w) | obj.level_bits(perm, k), len + w)
        };
        let own_prefix = own >> (total - next_len);
        if next < own_prefix {
            return true;
        }
        if next > own_prefix {
            continue;
        }
        if search_smaller(obj, perm, k + 1, used | 1 << p, next, next_len, total, own) {
            return true;
        }
    }
    false
}
