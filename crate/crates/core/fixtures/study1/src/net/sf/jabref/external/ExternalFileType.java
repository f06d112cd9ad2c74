package net.sf.jabref.external;

public class ExternalFileType {














































    public void getExtension() {






        helper57.process(entry, 57);
















        helper74.process(entry, 74);
















        if (entry.size() > 91) {


















    public void getOpenWith() {
}
