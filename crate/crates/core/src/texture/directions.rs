//! The indexed direction table.
//!
//! The 13 canonical 3D directions are the vectors in `{-1, 0, 1}^3` whose first
//! non-zero component is positive, in lexicographic order:
//!
//! | # | direction  | # | direction   | # | direction  |
//! |---|------------|---|-------------|---|------------|
//! | 1 | (0, 0, 1)  | 6 | (1, -1, 0)  | 11| (1, 1, -1) |
//! | 2 | (0, 1, -1) | 7 | (1, -1, 1)  | 12| (1, 1, 0)  |
//! | 3 | (0, 1, 0)  | 8 | (1, 0, -1)  | 13| (1, 1, 1)  |
//! | 4 | (0, 1, 1)  | 9 | (1, 0, 0)   |   |            |
//! | 5 | (1, -1, -1)| 10| (1, 0, 1)   |   |            |
//!
//! Offset index `k` (1-based) runs over distances first-major: with distances
//! `[1, 2, 3]`, indices 1..=13 are distance 1, 14..=26 distance 2 and 27..=39
//! distance 3. Components are `(dx, dy, dz)` in voxels.

pub fn canonical_directions() -> [[i32; 3]; 13] {
    let mut out = [[0; 3]; 13];
    let mut n = 0;
    for dx in -1..=1 {
        for dy in -1..=1 {
            for dz in -1..=1 {
                let v = [dx, dy, dz];
                if v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
                    out[n] = v;
                    n += 1;
                }
            }
        }
    }
    out
}

/// Offsets for the configured distances, in index order.
pub fn offset_table(distances: &[usize]) -> Vec<[i32; 3]> {
    let dirs = canonical_directions();
    distances
        .iter()
        .flat_map(|&d| dirs.iter().map(move |v| v.map(|c| c * d as i32)))
        .collect()
}
