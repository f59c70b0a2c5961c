//! Verified small GDDs consumed by the recursive constructions.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{exact_cover_search, Gdd, GddType, SearchLimits};

/// Extension of ingredient files inside a store directory.
pub const INGREDIENT_EXTENSION: &str = "gdd";

/// Shipped ingredients: type 3^5 and 6^t for 5 ≤ t ≤ 16, found by
/// [`orbit_search`](super::orbit_search) and re-verified on load.
const BUILTIN: &[(&str, &str)] = &[
    (
        "4gdd-3^5.gdd",
        include_str!("../../data/ingredients/4gdd-3^5.gdd"),
    ),
    (
        "4gdd-6^5.gdd",
        include_str!("../../data/ingredients/4gdd-6^5.gdd"),
    ),
    (
        "4gdd-6^6.gdd",
        include_str!("../../data/ingredients/4gdd-6^6.gdd"),
    ),
    (
        "4gdd-6^7.gdd",
        include_str!("../../data/ingredients/4gdd-6^7.gdd"),
    ),
    (
        "4gdd-6^8.gdd",
        include_str!("../../data/ingredients/4gdd-6^8.gdd"),
    ),
    (
        "4gdd-6^9.gdd",
        include_str!("../../data/ingredients/4gdd-6^9.gdd"),
    ),
    (
        "4gdd-6^10.gdd",
        include_str!("../../data/ingredients/4gdd-6^10.gdd"),
    ),
    (
        "4gdd-6^11.gdd",
        include_str!("../../data/ingredients/4gdd-6^11.gdd"),
    ),
    (
        "4gdd-6^12.gdd",
        include_str!("../../data/ingredients/4gdd-6^12.gdd"),
    ),
    (
        "4gdd-6^13.gdd",
        include_str!("../../data/ingredients/4gdd-6^13.gdd"),
    ),
    (
        "4gdd-6^14.gdd",
        include_str!("../../data/ingredients/4gdd-6^14.gdd"),
    ),
    (
        "4gdd-6^15.gdd",
        include_str!("../../data/ingredients/4gdd-6^15.gdd"),
    ),
    (
        "4gdd-6^16.gdd",
        include_str!("../../data/ingredients/4gdd-6^16.gdd"),
    ),
];

/// Ingredient GDDs indexed by block size and type. Every entry passed
/// `verify_gdd` when it was loaded or inserted.
#[derive(Debug, Clone, Default)]
pub struct IngredientStore {
    entries: BTreeMap<(usize, GddType), Gdd>,
    dir: Option<PathBuf>,
}

impl IngredientStore {
    pub fn empty() -> IngredientStore {
        IngredientStore::default()
    }

    /// The ingredients compiled into the binary.
    pub fn builtin() -> Result<IngredientStore> {
        let mut store = IngredientStore::empty();
        for (name, text) in BUILTIN {
            let gdd = Gdd::from_text(text).map_err(|e| e.with_path(Path::new(name)))?;
            store.insert(gdd)?;
        }
        Ok(store)
    }

    /// Loads every `*.gdd` file in `dir`. Any file that fails to parse or
    /// verify makes the whole load fail.
    pub fn from_dir(dir: &Path) -> Result<IngredientStore> {
        let mut store = IngredientStore {
            entries: BTreeMap::new(),
            dir: Some(dir.to_path_buf()),
        };
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.sort();
        for path in paths {
            if path.extension().and_then(|e| e.to_str()) != Some(INGREDIENT_EXTENSION) {
                continue;
            }
            let text = fs::read_to_string(&path)?;
            let gdd = Gdd::from_text(&text).map_err(|e| match e {
                Error::VerificationFailed(msg) => {
                    Error::VerificationFailed(format!("{}: {msg}", path.display()))
                }
                other => other.with_path(&path),
            })?;
            store.insert(gdd)?;
        }
        Ok(store)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn get(&self, k: usize, ty: &GddType) -> Option<&Gdd> {
        self.entries.get(&(k, ty.clone()))
    }

    pub fn contains(&self, k: usize, ty: &GddType) -> bool {
        self.get(k, ty).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Gdd> {
        self.entries.values()
    }

    /// Adds a GDD after re-verifying it.
    pub fn insert(&mut self, gdd: Gdd) -> Result<()> {
        let gdd = gdd.verified()?;
        self.entries.insert((gdd.k(), gdd.gdd_type()), gdd);
        Ok(())
    }

    /// File name used when saving a GDD: `<k>gdd-<type>.gdd`.
    pub fn file_name(k: usize, ty: &GddType) -> String {
        format!(
            "{k}gdd-{}.{INGREDIENT_EXTENSION}",
            ty.to_string().replace(' ', "_")
        )
    }

    /// Writes `gdd` into `dir` and adds it to the store.
    pub fn save(&mut self, dir: &Path, gdd: Gdd) -> Result<PathBuf> {
        let gdd = gdd.verified()?;
        let path = dir.join(Self::file_name(gdd.k(), &gdd.gdd_type()));
        fs::write(&path, gdd.to_text())?;
        self.insert(gdd)?;
        Ok(path)
    }

    /// Regenerates a missing ingredient by exact-cover search and adds it
    /// (writing it to the store directory when there is one).
    pub fn regenerate(&mut self, k: usize, ty: &GddType, limits: SearchLimits) -> Result<&Gdd> {
        if !self.contains(k, ty) {
            let gdd = exact_cover_search(ty, k, limits)?.ok_or_else(|| {
                Error::IngredientUnavailable(format!("no {k}-GDD of type {ty} exists"))
            })?;
            match self.dir.clone() {
                Some(dir) => {
                    self.save(&dir, gdd)?;
                }
                None => self.insert(gdd)?,
            }
        }
        Ok(self.get(k, ty).expect("just inserted"))
    }
}
