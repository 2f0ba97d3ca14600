use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// An interned variable name.
///
/// Ids are process-global; the derived ordering follows interning order and is
/// used only internally. Anything user-visible is ordered by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        let mut it = Interner { names: Vec::new(), ids: HashMap::new() };
        for name in ["q", "qb", "t"] {
            let id = it.names.len() as u32;
            it.names.push(name);
            it.ids.insert(name, id);
        }
        RwLock::new(it)
    })
}

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut it = interner().write().unwrap();
        if let Some(&id) = it.ids.get(name) {
            return Var(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = it.names.len() as u32;
        it.names.push(leaked);
        it.ids.insert(leaked, id);
        Var(id)
    }

    pub fn name(self) -> &'static str {
        interner().read().unwrap().names[self.0 as usize]
    }

    pub fn q() -> Var {
        Var(0)
    }

    pub fn qb() -> Var {
        Var(1)
    }

    pub fn t() -> Var {
        Var(2)
    }

    /// Equivariant parameter `u_k`, `k >= 1`.
    pub fn u(k: usize) -> Var {
        Var::new(&format!("u{k}"))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// True for names accepted by the parser: a letter followed by letters, digits or `_`.
pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
