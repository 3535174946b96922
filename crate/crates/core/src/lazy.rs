//! Memoized thunks and step budgets.
//!
//! Every coinductive value in this crate is a chain of [`Thunk`] cells.
//! Forcing a cell always goes through a [`StepBudget`]: each force costs one
//! step, and once the budget reaches zero the force fails with [`Exhausted`]
//! instead of looping. A thunk whose evaluation fails stays unevaluated, so
//! it can be forced again later under a fresh budget.

use std::cell::{Cell, OnceCell, RefCell};
use std::fmt;
use std::rc::Rc;

/// Signal that a [`StepBudget`] ran out (or a cell was found to depend on
/// itself) before a constructor was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, thiserror::Error)]
#[error("step budget exhausted")]
pub struct Exhausted;

/// A count of thunk forces still allowed.
#[derive(Debug)]
pub struct StepBudget {
    remaining: Cell<u64>,
    used: Cell<u64>,
}

impl StepBudget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(steps: u64) -> Self {
        StepBudget {
            remaining: Cell::new(steps),
            used: Cell::new(0),
        }
    }

    pub fn unlimited() -> Self {
        StepBudget::new(u64::MAX)
    }

    pub fn remaining(&self) -> u64 {
        self.remaining.get()
    }

    /// Number of steps consumed so far.
    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining.get() == 0
    }

    /// Consume one step.
    pub fn tick(&self) -> Result<(), Exhausted> {
        match self.remaining.get() {
            0 => Err(Exhausted),
            n => {
                self.remaining.set(n - 1);
                self.used.set(self.used.get() + 1);
                Ok(())
            }
        }
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::new(Self::DEFAULT_STEPS)
    }
}

type Init<T> = Rc<dyn Fn(&StepBudget) -> Result<T, Exhausted>>;

struct ThunkCell<T> {
    value: OnceCell<T>,
    init: RefCell<Option<Init<T>>>,
    forcing: Cell<bool>,
}

/// A shared, memoized, deferred computation.
///
/// Cloning a thunk shares the underlying cell. A force interrupted by
/// budget exhaustion can be retried.
pub struct Thunk<T>(Rc<ThunkCell<T>>);

impl<T> Clone for Thunk<T> {
    fn clone(&self) -> Self {
        Thunk(Rc::clone(&self.0))
    }
}

impl<T> Thunk<T> {
    pub fn new(init: impl Fn(&StepBudget) -> Result<T, Exhausted> + 'static) -> Self {
        Thunk(Rc::new(ThunkCell {
            value: OnceCell::new(),
            init: RefCell::new(Some(Rc::new(init))),
            forcing: Cell::new(false),
        }))
    }

    /// An already-evaluated thunk.
    pub fn ready(value: T) -> Self {
        Thunk(Rc::new(ThunkCell {
            value: OnceCell::from(value),
            init: RefCell::new(None),
            forcing: Cell::new(false),
        }))
    }

    pub fn is_forced(&self) -> bool {
        self.0.value.get().is_some()
    }

    /// The value, if this thunk has already been forced.
    pub fn peek(&self) -> Option<&T> {
        self.0.value.get()
    }

    /// Force the thunk, charging one step to `budget`.
    ///
    /// A cell that demands its own value while being evaluated can never
    /// produce a constructor; that case is reported as [`Exhausted`] too.
    pub fn force(&self, budget: &StepBudget) -> Result<&T, Exhausted> {
        budget.tick()?;
        if let Some(v) = self.0.value.get() {
            return Ok(v);
        }
        if self.0.forcing.get() {
            return Err(Exhausted);
        }
        let init = self
            .0
            .init
            .borrow()
            .clone()
            .expect("unforced thunk without initializer");
        self.0.forcing.set(true);
        let result = init(budget);
        self.0.forcing.set(false);
        let v = result?;
        if self.0.value.set(v).is_ok() {
            self.0.init.borrow_mut().take();
        }
        Ok(self.0.value.get().expect("value just set"))
    }

    /// Take the forced value out if this is the only handle to the cell.
    ///
    /// Used to unlink long forced chains iteratively on drop.
    pub fn take_if_unique(&mut self) -> Option<T> {
        Rc::get_mut(&mut self.0).and_then(|cell| cell.value.take())
    }

    /// Address of the shared cell, stable while any handle is alive.
    pub fn addr(&self) -> usize {
        Rc::as_ptr(&self.0) as *const () as usize
    }

    pub fn ptr_eq(a: &Self, b: &Self) -> bool {
        Rc::ptr_eq(&a.0, &b.0)
    }
}

impl<T: fmt::Debug> fmt::Debug for Thunk<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.peek() {
            Some(v) => f.debug_tuple("Thunk").field(v).finish(),
            None => f.write_str("Thunk(<unforced>)"),
        }
    }
}

/// Run `f` on a thread with a large stack and wait for its result.
///
/// Forcing deeply nested lazy structures (the sieve nests one filter per
/// emitted candidate) recurses once per layer.
pub fn with_large_stack<R, F>(f: F) -> R
where
    F: FnOnce() -> R + Send + 'static,
    R: Send + 'static,
{
    const STACK: usize = 512 * 1024 * 1024;
    std::thread::Builder::new()
        .stack_size(STACK)
        .spawn(f)
        .expect("spawn worker thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoizes_and_charges_each_force() {
        let calls = Rc::new(Cell::new(0));
        let c = Rc::clone(&calls);
        let t = Thunk::new(move |_| {
            c.set(c.get() + 1);
            Ok(42)
        });
        let b = StepBudget::new(10);
        assert_eq!(*t.force(&b).unwrap(), 42);
        assert_eq!(*t.force(&b).unwrap(), 42);
        assert_eq!(calls.get(), 1);
        assert_eq!(b.used(), 2);
    }

    #[test]
    fn zero_budget_never_forces() {
        let t = Thunk::new(|_| Ok(1));
        assert_eq!(t.force(&StepBudget::new(0)), Err(Exhausted));
        assert!(!t.is_forced());
        assert_eq!(*t.force(&StepBudget::new(1)).unwrap(), 1);
    }

    #[test]
    fn failed_force_can_be_retried() {
        let inner = Thunk::new(|_| Ok(5u32));
        let i2 = inner.clone();
        let outer = Thunk::new(move |b| Ok(*i2.force(b)? + 1));
        // One step pays for `outer` only.
        assert_eq!(outer.force(&StepBudget::new(1)), Err(Exhausted));
        assert!(!outer.is_forced());
        assert_eq!(*outer.force(&StepBudget::new(2)).unwrap(), 6);
    }

    #[test]
    fn self_dependency_is_reported() {
        let slot: Rc<RefCell<Option<Thunk<u8>>>> = Rc::new(RefCell::new(None));
        let s = Rc::clone(&slot);
        let t = Thunk::new(move |b| {
            let me = s.borrow().clone().unwrap();
            me.force(b).copied()
        });
        *slot.borrow_mut() = Some(t.clone());
        assert_eq!(t.force(&StepBudget::new(100)), Err(Exhausted));
        slot.borrow_mut().take();
    }

    #[test]
    fn ready_thunk_still_costs_a_step() {
        let t = Thunk::ready("x");
        assert!(t.is_forced());
        assert_eq!(t.force(&StepBudget::new(0)), Err(Exhausted));
    }
}
