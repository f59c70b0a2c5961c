//! Regenerates ingredient 4-GDDs.
//!
//! Usage: regenerate_ingredients <out-dir> <type> [shift] [seed] [max-nodes]
//!
//! With a shift, searches for a GDD on `Z_v` invariant under `x -> x + shift`;
//! with shift 0 (the default), runs the plain exact-cover search.

use std::path::PathBuf;
use std::time::Instant;

use design_forge::gdd::{exact_cover_search, orbit_search, GddType, IngredientStore, SearchLimits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [dir, ty, rest @ ..] = args.as_slice() else {
        eprintln!("usage: regenerate_ingredients <out-dir> <type> [shift] [seed] [max-nodes]");
        std::process::exit(2);
    };
    let ty: GddType = ty.parse()?;
    let shift: usize = rest.first().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let mut limits = SearchLimits::default();
    if let Some(seed) = rest.get(1) {
        limits.seed = seed.parse()?;
    }
    if let Some(budget) = rest.get(2) {
        limits.max_nodes = budget.parse()?;
    }
    let start = Instant::now();
    let found = if shift == 0 {
        exact_cover_search(&ty, 4, limits)?
    } else {
        orbit_search(&ty, 4, shift, limits)?
    };
    match found {
        Some(gdd) => {
            let path = IngredientStore::empty().save(&PathBuf::from(dir), gdd)?;
            println!("wrote {} in {:.2?}", path.display(), start.elapsed());
        }
        None => println!("no such 4-GDD of type {ty} ({:.2?})", start.elapsed()),
    }
    Ok(())
}
