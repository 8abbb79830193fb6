package app.extensions;

import java.net.URL;
import java.util.ArrayList;

public class ExtensionService {
    private final ExtensionRegistry registry = new ExtensionRegistry();
    private boolean verbose = false;

    public void reload() {
        registry.refresh();
        if (verbose) {
            Logger.note("registry reloaded");
        }
    }

    public int count() {
        return registry.size();
    }

    public void register(Extension extension) {
        if (extension == null) {
            throw new IllegalArgumentException("extension");
        }
        registry.add(extension);
    }

    public void setVerbose(boolean flag) {
        verbose = flag;
    }

    // Collects the download location of every installed extension.
    // Crashes with a ClassCastException on the cast below.
    public URL[] getExtensionURLs() {
        ArrayList<URL> urls = new ArrayList<URL>();
        for (Extension extension : registry.all()) {
            urls.add(extension.getURL());
        }

        URL[] array = (URL[]) urls.toArray();
        return array;
    }
}
