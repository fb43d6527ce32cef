use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{OnceLock, RwLock};

use super::TLElement;
use crate::coeff::qint_ratio;

fn cache() -> &'static RwLock<HashMap<usize, TLElement>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, TLElement>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn disk_dir() -> &'static RwLock<Option<PathBuf>> {
    static DIR: OnceLock<RwLock<Option<PathBuf>>> = OnceLock::new();
    DIR.get_or_init(|| RwLock::new(None))
}

/// Persist computed projectors as JSON under `dir`.
pub fn set_jw_cache_dir(dir: Option<PathBuf>) {
    *disk_dir().write().unwrap() = dir;
}

fn disk_path(n: usize) -> Option<PathBuf> {
    disk_dir().read().unwrap().as_ref().map(|d| d.join(format!("jw_{n}.json")))
}

fn load(n: usize) -> Option<TLElement> {
    let path = disk_path(n)?;
    let text = std::fs::read_to_string(path).ok()?;
    let x: TLElement = serde_json::from_str(&text).ok()?;
    (x.n() == n && x.m() == n).then_some(x)
}

fn store(n: usize, x: &TLElement) {
    if let Some(path) = disk_path(n) {
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Ok(text) = serde_json::to_string(x) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(tmp, path);
            }
        }
    }
}

/// The Jones–Wenzl projector p_n.
pub fn jones_wenzl(n: usize) -> TLElement {
    if let Some(x) = cache().read().unwrap().get(&n) {
        return x.clone();
    }
    let x = if n <= 1 {
        TLElement::identity(n)
    } else if let Some(x) = load(n) {
        x
    } else {
        let prev = jones_wenzl(n - 1).pad_right(1);
        let e = TLElement::e(n, n - 1).expect("n >= 2");
        let pe = prev.compose(&e).unwrap();
        let pep = pe.compose(&prev).unwrap();
        let x = prev.sub(&pep.scale(&qint_ratio(n as u32 - 1, n as u32))).unwrap();
        store(n, &x);
        x
    };
    cache().write().unwrap().insert(n, x.clone());
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{qint, FieldElem};
    use crate::tangle::FlatTangle;

    #[test]
    fn small_projectors() {
        assert_eq!(jones_wenzl(1), TLElement::identity(1));
        let p2 = TLElement::identity(2).sub(&TLElement::e(2, 1).unwrap().scale(&qint(2).inv().unwrap())).unwrap();
        assert_eq!(jones_wenzl(2), p2);
    }

    #[test]
    fn p3_coefficient() {
        let p3 = jones_wenzl(3);
        let e1 = FlatTangle::turnback(3, 1).unwrap();
        let want = -FieldElem::new(crate::coeff::quantum_integer(2), crate::coeff::quantum_integer(3)).unwrap();
        assert_eq!(p3.coeff(&e1), want);
    }

    #[test]
    fn turnbacks_die() {
        for n in 2..=5 {
            let p = jones_wenzl(n);
            assert_eq!(p.compose(&p).unwrap(), p);
            for i in 1..n {
                let e = TLElement::e(n, i).unwrap();
                assert!(e.compose(&p).unwrap().is_zero());
                assert!(p.compose(&e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn disk_cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("cheb-jw-{}", std::process::id()));
        let x = jones_wenzl(4);
        set_jw_cache_dir(Some(dir.clone()));
        store(4, &x);
        assert_eq!(load(4), Some(x));
        set_jw_cache_dir(None);
        let _ = std::fs::remove_dir_all(dir);
    }
}
