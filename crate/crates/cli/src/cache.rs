//! On-disk cache of decomposition matrices.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qfock::canonical::{DecompositionMatrix, Sign};
use qfock::fock::MultiCharge;

/// Bumped whenever a change could alter cached results.
pub const CACHE_VERSION: &str = concat!("qfock-", env!("CARGO_PKG_VERSION"), "-blocks1");

pub struct BlockCache {
    root: PathBuf,
}

impl BlockCache {
    pub fn new(dir: &Path) -> Self {
        BlockCache { root: dir.join(CACHE_VERSION) }
    }

    fn path(&self, n: usize, l: usize, charge: &MultiCharge, degree: usize, sign: Sign) -> PathBuf {
        let s: Vec<String> = charge.0.iter().map(|x| x.to_string()).collect();
        self.root
            .join(format!("n{}_l{}_s{}_N{}_{}.json", n, l, s.join("_"), degree, sign))
    }

    pub fn load(&self, n: usize, l: usize, charge: &MultiCharge, degree: usize, sign: Sign) -> Option<DecompositionMatrix> {
        let text = fs::read_to_string(self.path(n, l, charge, degree, sign)).ok()?;
        let m: DecompositionMatrix = serde_json::from_str(&text).ok()?;
        let matches = m.n == n && m.l == l && &m.charge == charge && m.degree == degree && m.sign == sign;
        matches.then_some(m)
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn store(&self, m: &DecompositionMatrix) -> std::io::Result<()> {
        fs::create_dir_all(&self.root)?;
        let target = self.path(m.n, m.l, &m.charge, m.degree, m.sign);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        tmp.write_all(serde_json::to_string(m).expect("matrix serializes").as_bytes())?;
        tmp.flush()?;
        tmp.persist(target).map_err(|e| e.error)?;
        Ok(())
    }
}
