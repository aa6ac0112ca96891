//! On-disk cache of certified dominant roots and the continued fractions of
//! their `tau`.
//!
//! One text file per `(k, precision)`:
//!
//! ```text
//! KFIBCACHE v1
//! k 4
//! bits 2200
//! lo 1eda1d... p -2200
//! hi 1eda1d... p -2200
//! cf 0 1 2 5 ...
//! ```
//!
//! Endpoints are exact (`mantissa_hex p exponent`), so a reload is bit
//! identical. Every loaded root is re-certified; files that fail to parse or
//! certify are refused, never overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Num;

use crate::algebraic::{dominant_root, DominantRoot, Dyadic, DyadicInterval};
use crate::error::{Error, Result};

pub const CACHE_HEADER: &str = "KFIBCACHE v1";

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "KFIB_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub root: DominantRoot,
    pub quotients: Option<Vec<BigInt>>,
}

/// A root obtained through the cache; `hit` is false when it was computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachedRoot {
    pub root: DominantRoot,
    pub hit: bool,
}

fn encode_dyadic(d: &Dyadic) -> String {
    format!("{} p {}", d.mantissa().to_str_radix(16), d.exponent())
}

fn decode_dyadic(s: &str) -> Result<Dyadic> {
    let bad = || Error::Cache(format!("malformed dyadic '{s}'"));
    let mut it = s.split_whitespace();
    let (Some(m), Some("p"), Some(e), None) = (it.next(), it.next(), it.next(), it.next()) else {
        return Err(bad());
    };
    let m = BigInt::from_str_radix(m, 16).map_err(|_| bad())?;
    let e: i64 = e.parse().map_err(|_| bad())?;
    Ok(Dyadic::new(m, e))
}

pub fn encode(entry: &CacheEntry) -> String {
    let r = &entry.root;
    let mut s = format!(
        "{CACHE_HEADER}\nk {}\nbits {}\nlo {}\nhi {}\n",
        r.k,
        r.precision_bits,
        encode_dyadic(r.alpha.lo()),
        encode_dyadic(r.alpha.hi())
    );
    if let Some(q) = &entry.quotients {
        let list: Vec<String> = q.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("cf {}\n", list.join(" ")));
    }
    s
}

/// Parse and re-certify a cache file's contents.
pub fn decode(text: &str) -> Result<CacheEntry> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CACHE_HEADER) => {}
        Some(h) => {
            return Err(Error::Cache(format!(
                "unsupported header '{h}' (expected '{CACHE_HEADER}')"
            )))
        }
        None => return Err(Error::Cache("empty cache file".into())),
    }
    let mut field = |name: &str| -> Result<String> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Cache(format!("missing '{name}' line")))?;
        line.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| Error::Cache(format!("expected '{name}', found '{line}'")))
    };
    let k: u32 = field("k")?.parse().map_err(|_| Error::Cache("bad k".into()))?;
    let bits: u32 = field("bits")?.parse().map_err(|_| Error::Cache("bad bits".into()))?;
    let lo = decode_dyadic(&field("lo")?)?;
    let hi = decode_dyadic(&field("hi")?)?;
    let quotients = match lines.next() {
        None => None,
        Some(line) => {
            let rest = line
                .strip_prefix("cf")
                .ok_or_else(|| Error::Cache(format!("unexpected line '{line}'")))?;
            let q = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<BigInt>()
                        .map_err(|_| Error::Cache(format!("bad quotient '{t}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(q)
        }
    };
    if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
        return Err(Error::Cache(format!("trailing content '{extra}'")));
    }
    let alpha = DyadicInterval::new(lo, hi).map_err(|e| Error::Cache(e.to_string()))?;
    let root =
        DominantRoot::from_parts(k, alpha, bits).map_err(|e| Error::Cache(format!("root fails certification: {e}")))?;
    Ok(CacheEntry { root, quotients })
}

/// Directory of cache files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCache {
    dir: PathBuf,
}

impl RootCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RootCache { dir: dir.into() }
    }

    /// Cache at the directory named by [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(RootCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, k: u32, bits: u32) -> PathBuf {
        self.dir.join(format!("root-k{k}-p{bits}.kfc"))
    }

    /// The stored entry, `None` when absent.
    pub fn load(&self, k: u32, bits: u32) -> Result<Option<CacheEntry>> {
        let path = self.path(k, bits);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry = decode(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if entry.root.k != k || entry.root.precision_bits != bits {
            return Err(Error::Cache(format!(
                "{} holds k = {}, bits = {}",
                path.display(),
                entry.root.k,
                entry.root.precision_bits
            )));
        }
        Ok(Some(entry))
    }

    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(entry.root.k, entry.root.precision_bits);
        let tmp = path.with_extension("kfc.tmp");
        fs::write(&tmp, encode(entry))?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cached root, computing and storing it on a miss.
    pub fn root(&self, k: u32, bits: u32) -> Result<CachedRoot> {
        if let Some(entry) = self.load(k, bits)? {
            return Ok(CachedRoot {
                root: entry.root,
                hit: true,
            });
        }
        let root = dominant_root(k, bits)?;
        self.store(&CacheEntry {
            root: root.clone(),
            quotients: None,
        })?;
        Ok(CachedRoot { root, hit: false })
    }

    /// Attach the continued fraction quotients of `tau` to a stored root, or
    /// check them against the ones already stored.
    pub fn record_quotients(&self, k: u32, bits: u32, quotients: &[BigInt]) -> Result<()> {
        let Some(mut entry) = self.load(k, bits)? else {
            return Err(Error::Cache(format!("no cached root for k = {k}, bits = {bits}")));
        };
        match &entry.quotients {
            Some(q) if q.as_slice() == quotients => Ok(()),
            Some(q) => Err(Error::Cache(format!(
                "stored quotients for k = {k}, bits = {bits} differ from the recomputed ones ({} vs {} terms)",
                q.len(),
                quotients.len()
            ))),
            None => {
                entry.quotients = Some(quotients.to_vec());
                self.store(&entry)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RootCache::new(dir.path());
        let miss = cache.root(4, 300).unwrap();
        assert!(!miss.hit);
        let hit = cache.root(4, 300).unwrap();
        assert!(hit.hit);
        assert_eq!(hit.root, miss.root);
        assert_eq!(hit.root.alpha.lo(), miss.root.alpha.lo());
        assert_eq!(hit.root.alpha.hi(), miss.root.alpha.hi());
    }

    #[test]
    fn quotients_roundtrip_and_conflict() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RootCache::new(dir.path());
        cache.root(5, 200).unwrap();
        let q: Vec<BigInt> = [0, 1, 2, 5].into_iter().map(BigInt::from).collect();
        cache.record_quotients(5, 200, &q).unwrap();
        assert_eq!(cache.load(5, 200).unwrap().unwrap().quotients, Some(q.clone()));
        cache.record_quotients(5, 200, &q).unwrap();
        assert!(matches!(cache.record_quotients(5, 200, &q[..3]), Err(Error::Cache(_))));
    }

    #[test]
    fn version_mismatch_refused() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RootCache::new(dir.path());
        cache.root(4, 100).unwrap();
        let path = cache.path(4, 100);
        let text = fs::read_to_string(&path).unwrap().replace("v1", "v2");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.root(4, 100), Err(Error::Cache(_))));
        assert!(fs::read_to_string(&path).unwrap().starts_with("KFIBCACHE v2"));
    }

    #[test]
    fn tampered_endpoint_refused() {
        let root = dominant_root(4, 100).unwrap();
        let wide = Dyadic::new(3.into(), -1);
        let bad = CacheEntry {
            root: DominantRoot {
                alpha: DyadicInterval::new(wide, root.alpha.hi().clone()).unwrap(),
                ..root
            },
            quotients: None,
        };
        assert!(matches!(decode(&encode(&bad)), Err(Error::Cache(_))));
    }

    #[test]
    fn corrupt_lines_refused() {
        let good = encode(&CacheEntry {
            root: dominant_root(4, 64).unwrap(),
            quotients: None,
        });
        assert!(decode(&good).is_ok());
        for bad in [
            String::new(),
            good.replace("k 4", "k four"),
            good.replace(" p ", " q "),
            good.replace("bits 64\n", ""),
            format!("{good}junk\n"),
            format!("{good}cf 1 x\n"),
        ] {
            assert!(matches!(decode(&bad), Err(Error::Cache(_))), "{bad}");
        }
    }

    #[test]
    fn wrong_file_for_key_refused() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RootCache::new(dir.path());
        let e = CacheEntry {
            root: dominant_root(6, 80).unwrap(),
            quotients: None,
        };
        fs::write(cache.path(4, 80), encode(&e)).unwrap();
        assert!(matches!(cache.load(4, 80), Err(Error::Cache(_))));
    }
}
