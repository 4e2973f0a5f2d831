use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Nonnegative gcd by Lehmer's algorithm: quotients are simulated on the
/// leading 63 bits and applied to the full numbers in batches. The library
/// gcd is binary and reallocates on every shift, which dominates elimination
/// on entries of a few hundred bits.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.magnitude().clone(), b.magnitude().clone());
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    while b.bits() > 63 {
        let shift = a.bits() - 63;
        let mut x = i128::from((&a >> shift).to_u64().expect("63 bits"));
        let mut y = i128::from((&b >> shift).to_u64().expect("63 bits"));
        let (mut ca, mut cb, mut cc, mut cd) = (1i128, 0i128, 0i128, 1i128);
        while y + cc != 0 && y + cd != 0 {
            let q = (x + ca) / (y + cc);
            if q != (x + cb) / (y + cd) {
                break;
            }
            (ca, cc) = (cc, ca - q * cc);
            (cb, cd) = (cd, cb - q * cd);
            (x, y) = (y, x - q * y);
        }
        if cb == 0 {
            let r = &a % &b;
            a = std::mem::replace(&mut b, r);
        } else {
            let (sa, sb) = (BigInt::from(a), BigInt::from(b));
            let na = &sa * ca + &sb * cb;
            let nb = &sa * cc + &sb * cd;
            debug_assert!(!na.is_negative() && !nb.is_negative());
            a = na.into_parts().1;
            b = nb.into_parts().1;
        }
    }
    let mut x = b.to_u64().expect("63 bits");
    if x == 0 {
        return BigInt::from(a);
    }
    let mut y = (&a % &b).to_u64().expect("below b");
    while y != 0 {
        (x, y) = (y, x % y);
    }
    BigInt::from(x)
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    // Starting from the smallest entry makes every later Euclid run begin
    // with one short operand.
    let Some(start) = v.iter().filter(|x| !x.is_zero()).min_by_key(|x| x.bits()) else {
        return BigInt::zero();
    };
    let mut g = start.abs();
    for x in v {
        if g.is_one() {
            break;
        }
        if x.is_zero() {
            continue;
        }
        g = gcd(x, &g);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

/// Divides out the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Primitive integer vector on the ray spanned by a rational vector.
pub fn primitive_of_rational(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&scaled)
}

/// Lexicographic sign: the sign of the first nonzero entry.
pub fn leading_sign<T: Signed>(v: &[T]) -> i32 {
    for x in v {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

pub fn sub<T: Clone + std::ops::Sub<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<T: Clone + std::ops::Add<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<T: Clone + std::ops::Mul<Output = T>>(k: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| k.clone() * x.clone()).collect()
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
