use super::DeltaPoly;

/// The generic polynomial `f` and the order-2 / order-3 polynomials `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferencePolys {
    pub f: DeltaPoly,
    pub h2: DeltaPoly,
    pub h3: DeltaPoly,
}

/// `(p, l, c)` for `c δ^p (1-δ)^l`.
const F_TERMS: [(usize, usize, i64); 19] = [
    (0, 2, 1),
    (1, 2, 1),
    (1, 3, 1),
    (2, 4, 4),
    (3, 2, 2),
    (3, 5, 3),
    (4, 9, 10),
    (5, 7, 26),
    (5, 8, 20),
    (6, 5, 6),
    (6, 6, 16),
    (6, 8, 40),
    (7, 4, 3),
    (7, 6, 8),
    (7, 7, 20),
    (9, 8, 10),
    (10, 7, 20),
    (11, 6, 10),
    (11, 7, 15),
];

const H3_TERMS: [(usize, usize, i64); 9] = [
    (0, 2, 1),
    (1, 2, 1),
    (1, 3, 1),
    (3, 2, 2),
    (2, 4, 4),
    (3, 5, 3),
    (7, 4, 12),
    (6, 4, 6),
    (4, 6, 1),
];

pub fn reference_polys() -> ReferencePolys {
    // (1-δ)^2 (1 + 2δ + 3δ^2 + 4δ^3 + 5δ^4 + 6δ^5)
    let h2: Vec<(usize, usize, i64)> = (0..6).map(|k| (k, 2, k as i64 + 1)).collect();
    ReferencePolys { f: DeltaPoly::from_ints(&F_TERMS), h2: DeltaPoly::from_ints(&h2), h3: DeltaPoly::from_ints(&H3_TERMS) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn transcription_spot_checks() {
        let r = reference_polys();
        assert_eq!(r.f.len(), 19);
        assert_eq!(r.h3.len(), 9);
        assert_eq!(r.f.coeff(4, 9), BigRational::from_integer(10.into()));
        assert_eq!(r.h3.coeff(7, 4), BigRational::from_integer(12.into()));
        assert_eq!(r.h2.eval(0.0), 1.0);
        assert_eq!(r.f.eval(0.0), 1.0);
        assert_eq!(r.f.eval(1.0), 0.0);
    }
}
