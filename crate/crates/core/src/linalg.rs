use nalgebra::{Const, DimMin, SMatrix, SVector};

fn norm1<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number; infinite when the matrix is singular.
pub fn condition_number<const N: usize>(m: &SMatrix<f64, N, N>) -> f64
where
    Const<N>: DimMin<Const<N>, Output = Const<N>>,
{
    match m.lu().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Dense LU solve with partial pivoting. `None` when singular or the
/// solution is not finite.
pub fn solve<const N: usize>(m: &SMatrix<f64, N, N>, b: &SVector<f64, N>) -> Option<SVector<f64, N>>
where
    Const<N>: DimMin<Const<N>, Output = Const<N>>,
{
    let x = m.lu().solve(b)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}
