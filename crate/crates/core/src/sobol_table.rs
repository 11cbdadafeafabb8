//! Joe-Kuo direction numbers (new-joe-kuo-6.21201), dimensions 2 and up.
//!
//! Each entry is the primitive polynomial degree `s`, its interior
//! coefficient bits `a`, and the initial odd direction integers `m_1..m_s`.
//! Dimension 1 is the van der Corput sequence and needs no entry.

pub(crate) struct Polynomial {
    pub degree: u32,
    pub coeffs: u32,
    pub initial: &'static [u32],
}

pub(crate) const POLYNOMIALS: &[Polynomial] = &[
    Polynomial { degree: 1, coeffs: 0, initial: &[1] },
    Polynomial { degree: 2, coeffs: 1, initial: &[1, 3] },
    Polynomial { degree: 3, coeffs: 1, initial: &[1, 3, 1] },
    Polynomial { degree: 3, coeffs: 2, initial: &[1, 1, 1] },
    Polynomial { degree: 4, coeffs: 1, initial: &[1, 1, 3, 3] },
    Polynomial { degree: 4, coeffs: 4, initial: &[1, 3, 5, 13] },
    Polynomial { degree: 5, coeffs: 2, initial: &[1, 1, 5, 5, 17] },
    Polynomial { degree: 5, coeffs: 4, initial: &[1, 1, 5, 5, 5] },
    Polynomial { degree: 5, coeffs: 7, initial: &[1, 1, 7, 11, 19] },
    Polynomial { degree: 5, coeffs: 11, initial: &[1, 1, 5, 1, 1] },
    Polynomial { degree: 5, coeffs: 13, initial: &[1, 1, 1, 3, 11] },
    Polynomial { degree: 5, coeffs: 14, initial: &[1, 3, 5, 5, 31] },
    Polynomial { degree: 6, coeffs: 1, initial: &[1, 3, 3, 9, 7, 49] },
    Polynomial { degree: 6, coeffs: 13, initial: &[1, 1, 1, 15, 21, 21] },
    Polynomial { degree: 6, coeffs: 16, initial: &[1, 3, 1, 13, 27, 49] },
    Polynomial { degree: 6, coeffs: 19, initial: &[1, 1, 1, 15, 7, 5] },
    Polynomial { degree: 6, coeffs: 22, initial: &[1, 3, 1, 15, 13, 25] },
    Polynomial { degree: 6, coeffs: 25, initial: &[1, 1, 5, 5, 19, 61] },
    Polynomial { degree: 7, coeffs: 1, initial: &[1, 3, 7, 11, 23, 15, 103] },
    Polynomial { degree: 7, coeffs: 4, initial: &[1, 3, 7, 13, 13, 15, 69] },
    Polynomial { degree: 7, coeffs: 7, initial: &[1, 1, 3, 13, 7, 35, 63] },
    Polynomial { degree: 7, coeffs: 8, initial: &[1, 3, 5, 9, 1, 25, 53] },
    Polynomial { degree: 7, coeffs: 14, initial: &[1, 3, 1, 13, 9, 35, 107] },
    Polynomial { degree: 7, coeffs: 19, initial: &[1, 3, 1, 5, 27, 61, 31] },
    Polynomial { degree: 7, coeffs: 21, initial: &[1, 1, 5, 11, 19, 41, 61] },
    Polynomial { degree: 7, coeffs: 28, initial: &[1, 3, 5, 3, 3, 13, 69] },
    Polynomial { degree: 7, coeffs: 31, initial: &[1, 1, 7, 13, 1, 19, 1] },
    Polynomial { degree: 7, coeffs: 32, initial: &[1, 3, 7, 5, 13, 19, 59] },
    Polynomial { degree: 7, coeffs: 37, initial: &[1, 1, 3, 9, 25, 29, 41] },
    Polynomial { degree: 7, coeffs: 41, initial: &[1, 3, 5, 13, 23, 1, 55] },
    Polynomial { degree: 7, coeffs: 42, initial: &[1, 3, 7, 3, 13, 59, 17] },
];
