use crate::qalg::{SparseVec, Q};
use crate::trees::Signature;
use crate::Result;

use super::Operad;

/// What the cobar and algebra code needs from a (colored) operad: finite
/// components with a basis, partial compositions and the relabelling action.
pub trait OperadData: Sync {
    fn dim(&self, sig: &Signature) -> usize;

    /// `a ∘_i b` (1-based slot); returns the composite signature too.
    fn compose(
        &self,
        sa: &Signature,
        a: &[(usize, Q)],
        i: usize,
        sb: &Signature,
        b: &[(usize, Q)],
    ) -> Result<(Signature, SparseVec)>;

    /// Input `k` becomes input `p[k]` (0-based). The result lives in
    /// `sig.permuted(p)`.
    fn permute(&self, sig: &Signature, p: &[usize], x: &[(usize, Q)]) -> SparseVec;

    fn label(&self, sig: &Signature, i: usize) -> String;

    /// Builds whatever is cached for these signatures, possibly in parallel.
    fn prepare(&self, _sigs: &[Signature]) {}
}

impl OperadData for Operad {
    fn dim(&self, sig: &Signature) -> usize {
        Operad::dim(self, sig)
    }

    fn compose(
        &self,
        sa: &Signature,
        a: &[(usize, Q)],
        i: usize,
        sb: &Signature,
        b: &[(usize, Q)],
    ) -> Result<(Signature, SparseVec)> {
        Operad::compose(self, sa, a, i, sb, b)
    }

    fn permute(&self, sig: &Signature, p: &[usize], x: &[(usize, Q)]) -> SparseVec {
        Operad::permute(self, sig, p, x)
    }

    fn label(&self, sig: &Signature, i: usize) -> String {
        self.component(sig).label(i)
    }

    fn prepare(&self, sigs: &[Signature]) {
        Operad::prepare(self, sigs)
    }
}
