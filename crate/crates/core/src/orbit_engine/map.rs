use std::sync::Arc;

use rand::rngs::StdRng;

/// A set-valued map `S: X ⇉ X` seen through sampling.
///
/// Only `sample` is mandatory. The optional forms let monitors certify
/// membership, emptiness or the whole image when the map is known exactly.
pub trait SetValuedMap<P>: Send + Sync {
    /// At most `budget` points of `S(x)`.
    fn sample(&self, x: &P, budget: usize, rng: &mut StdRng) -> Vec<P>;

    /// `Some(y ∈ S(x))` when a predicate form is available.
    fn contains(&self, _x: &P, _y: &P) -> Option<bool> {
        None
    }

    /// `Some(true)` certifies `S(x) = ∅`, `Some(false)` certifies nonempty.
    fn known_empty(&self, _x: &P) -> Option<bool> {
        None
    }

    /// The whole image, when it is finite and known.
    fn exact_image(&self, _x: &P) -> Option<Vec<P>> {
        None
    }

    /// `exact_image` when available, samples otherwise.
    fn image_or_sample(&self, x: &P, budget: usize, rng: &mut StdRng) -> Vec<P> {
        self.exact_image(x).unwrap_or_else(|| self.sample(x, budget, rng))
    }

    /// Membership from the predicate, else from the exact image.
    fn decides(&self, x: &P, y: &P) -> Option<bool>
    where
        P: PartialEq,
    {
        self.contains(x, y)
            .or_else(|| self.exact_image(x).map(|img| img.contains(y)))
    }
}

type SampleFn<P> = Arc<dyn Fn(&P, usize, &mut StdRng) -> Vec<P> + Send + Sync>;
type PredicateFn<P> = Arc<dyn Fn(&P, &P) -> bool + Send + Sync>;
type EmptyFn<P> = Arc<dyn Fn(&P) -> Option<bool> + Send + Sync>;
type ImageFn<P> = Arc<dyn Fn(&P) -> Option<Vec<P>> + Send + Sync>;
type FiniteImageFn<P> = Arc<dyn Fn(&P) -> Vec<P> + Send + Sync>;

/// A [`SetValuedMap`] assembled from closures.
#[derive(Clone)]
pub struct ClosureMap<P> {
    sampler: SampleFn<P>,
    predicate: Option<PredicateFn<P>>,
    emptiness: Option<EmptyFn<P>>,
    image: Option<ImageFn<P>>,
}

impl<P: Clone + 'static> ClosureMap<P> {
    pub fn from_sampler(sampler: impl Fn(&P, usize, &mut StdRng) -> Vec<P> + Send + Sync + 'static) -> Self {
        Self {
            sampler: Arc::new(sampler),
            predicate: None,
            emptiness: None,
            image: None,
        }
    }

    /// A map with finite images known exactly; every optional form is derived.
    pub fn finite(image: impl Fn(&P) -> Vec<P> + Send + Sync + 'static) -> Self
    where
        P: PartialEq,
    {
        let image: FiniteImageFn<P> = Arc::new(image);
        let (a, b, c) = (image.clone(), image.clone(), image.clone());
        Self {
            sampler: Arc::new(move |x, budget, _| a(x).into_iter().take(budget).collect()),
            predicate: Some(Arc::new(move |x, y| b(x).contains(y))),
            emptiness: Some(Arc::new(move |x| Some(c(x).is_empty()))),
            image: Some(Arc::new(move |x| Some(image(x)))),
        }
    }

    pub fn with_predicate(mut self, predicate: impl Fn(&P, &P) -> bool + Send + Sync + 'static) -> Self {
        self.predicate = Some(Arc::new(predicate));
        self
    }

    pub fn with_emptiness(mut self, emptiness: impl Fn(&P) -> Option<bool> + Send + Sync + 'static) -> Self {
        self.emptiness = Some(Arc::new(emptiness));
        self
    }

    /// Exact images for the points where they are known.
    pub fn with_partial_image(mut self, image: impl Fn(&P) -> Option<Vec<P>> + Send + Sync + 'static) -> Self {
        self.image = Some(Arc::new(image));
        self
    }
}

impl<P: Send + Sync> SetValuedMap<P> for ClosureMap<P> {
    fn sample(&self, x: &P, budget: usize, rng: &mut StdRng) -> Vec<P> {
        (self.sampler)(x, budget, rng)
    }

    fn contains(&self, x: &P, y: &P) -> Option<bool> {
        self.predicate.as_ref().map(|p| p(x, y))
    }

    fn known_empty(&self, x: &P) -> Option<bool> {
        self.emptiness.as_ref().and_then(|e| e(x))
    }

    fn exact_image(&self, x: &P) -> Option<Vec<P>> {
        self.image.as_ref().and_then(|i| i(x))
    }
}

impl<P> std::fmt::Debug for ClosureMap<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosureMap")
            .field("predicate", &self.predicate.is_some())
            .field("emptiness", &self.emptiness.is_some())
            .field("image", &self.image.is_some())
            .finish()
    }
}

impl<P, M: SetValuedMap<P> + ?Sized> SetValuedMap<P> for Arc<M> {
    fn sample(&self, x: &P, budget: usize, rng: &mut StdRng) -> Vec<P> {
        (**self).sample(x, budget, rng)
    }

    fn contains(&self, x: &P, y: &P) -> Option<bool> {
        (**self).contains(x, y)
    }

    fn known_empty(&self, x: &P) -> Option<bool> {
        (**self).known_empty(x)
    }

    fn exact_image(&self, x: &P) -> Option<Vec<P>> {
        (**self).exact_image(x)
    }
}
