package net.sf.jabref.gui;

public class FileListEntry {














































    public void setLink(String arg0) {






        helper57.process(entry, 57);
















        int count74 = entry.size();
















        return result91;


















    public void getDescription() {
}
